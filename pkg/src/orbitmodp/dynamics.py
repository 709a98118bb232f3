"""Exact self-maps of projective space over Q and their reductions mod p.

A map is a tuple of N+1 homogeneous integer-coefficient polynomials of a
common degree d acting on P^N, kept as sparse term lists. Univariate
polynomial maps z -> sum c_k z^k are the special case used by all the
quadratic experiments; they homogenize to [sum c_k X^k Y^(d-k), Y^d].

Points carry canonical coordinates: over Q, coprime integers with the
first nonzero coordinate positive; over F_p, the unique scaling with
first nonzero coordinate 1, usable directly as a hash key.
"""

import math
from dataclasses import dataclass
from math import gcd


class InvalidPointError(ValueError):
    """All-zero coordinate vector."""


class IndeterminatePointError(ValueError):
    """All defining polynomials vanish at the point (bad reduction signal)."""


class MapParseError(ValueError):
    """Malformed map text; carries (line, token) position, 1-based."""

    def __init__(self, message, line=None, token=None):
        self.line = line
        self.token = token
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", token {token}" if token else "") + ")"
        super().__init__(message + where)


@dataclass(frozen=True)
class ProjectiveMorphism:
    """[F_0, ..., F_N] on P^N; each F_i is a tuple of (exponents, coeff) terms."""

    dim: int
    degree: int
    polys: tuple

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if len(self.polys) != self.dim + 1:
            raise ValueError(f"expected {self.dim + 1} polynomials on P^{self.dim}")
        nonzero = False
        for terms in self.polys:
            for exps, coeff in terms:
                if len(exps) != self.dim + 1:
                    raise ValueError("exponent vector has wrong length")
                if sum(exps) != self.degree:
                    raise ValueError(
                        f"term {exps} is not homogeneous of degree {self.degree}"
                    )
                if coeff:
                    nonzero = True
        if not nonzero:
            raise ValueError("all polynomials are identically zero")


@dataclass(frozen=True)
class AffinePolyMap:
    """z -> c_0 + c_1 z + ... + c_d z^d on P^1, coefficients low-to-high."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) < 2 or self.coeffs[-1] == 0:
            raise ValueError("need degree >= 1 with nonzero leading coefficient")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def homogenize(self) -> ProjectiveMorphism:
        d = self.degree
        f0 = tuple(((k, d - k), c) for k, c in enumerate(self.coeffs) if c)
        f1 = (((0, d), 1),)
        return ProjectiveMorphism(dim=1, degree=d, polys=(f0, f1))


def as_projective(phi) -> ProjectiveMorphism:
    if isinstance(phi, AffinePolyMap):
        return phi.homogenize()
    return phi


@dataclass(frozen=True)
class ProjPointQ:
    """Point of P^N(Q): coprime integer coordinates, first nonzero one positive."""

    coords: tuple

    def __post_init__(self):
        g = 0
        for c in self.coords:
            g = gcd(g, c)
        if g == 0:
            raise InvalidPointError("all coordinates are zero")
        if g != 1:
            raise InvalidPointError(f"coordinates {self.coords} are not coprime")
        for c in self.coords:
            if c:
                if c < 0:
                    raise InvalidPointError(f"sign of {self.coords} is not canonical")
                break


def normalize(raw) -> ProjPointQ:
    """Canonical coprime representative; idempotent and scale-invariant."""
    coords = tuple(int(c) for c in raw)
    g = 0
    for c in coords:
        g = gcd(g, c)
    if g == 0:
        raise InvalidPointError("all coordinates are zero")
    if g != 1:
        coords = tuple(c // g for c in coords)
    for c in coords:
        if c:
            if c < 0:
                coords = tuple(-x for x in coords)
            break
    return ProjPointQ(coords)


@dataclass(frozen=True)
class ProjPointFp:
    """Point of P^N(F_p), scaled so the first nonzero coordinate is 1."""

    p: int
    coords: tuple

    def __post_init__(self):
        leading = None
        for c in self.coords:
            if not 0 <= c < self.p:
                raise InvalidPointError(f"{c} is not reduced mod {self.p}")
            if c and leading is None:
                leading = c
        if leading is None:
            raise InvalidPointError(f"all coordinates vanish mod {self.p}")
        if leading != 1:
            raise InvalidPointError(f"representative {self.coords} is not canonical")


def point_mod_p(coords, p: int) -> ProjPointFp:
    """Canonical representative of [coords] in P^N(F_p)."""
    red = tuple(c % p for c in coords)
    for c in red:
        if c:
            if c != 1:
                inv = pow(c, -1, p)
                red = tuple(x * inv % p for x in red)
            return ProjPointFp(p, red)
    raise InvalidPointError(f"all coordinates vanish mod {p}")


def reduce_point(P: ProjPointQ, p: int) -> ProjPointFp:
    """Reduction mod p; well-defined since gcd of the coordinates is 1."""
    return point_mod_p(P.coords, p)


def _eval_poly(terms, coords):
    total = 0
    for exps, coeff in terms:
        v = coeff
        for x, e in zip(coords, exps):
            if e:
                v *= x**e
        total += v
    return total


def _eval_poly_mod(terms, coords, p):
    total = 0
    for exps, coeff in terms:
        v = coeff
        for x, e in zip(coords, exps):
            if e:
                v *= pow(x, e, p)
        total += v
    return total % p


def eval_mod_p(phi, Q: ProjPointFp) -> ProjPointFp:
    """Apply the reduced map; raises IndeterminatePointError if every form vanishes."""
    phi = as_projective(phi)
    p = Q.p
    vals = tuple(_eval_poly_mod(terms, Q.coords, p) for terms in phi.polys)
    if not any(vals):
        raise IndeterminatePointError(f"map undefined at {Q.coords} mod {p}")
    return point_mod_p(vals, p)


def eval_exact(phi, Q: ProjPointQ) -> ProjPointQ:
    """Apply the map over Q with exact big-integer arithmetic, then normalize."""
    phi = as_projective(phi)
    vals = tuple(_eval_poly(terms, Q.coords) for terms in phi.polys)
    if not any(vals):
        raise IndeterminatePointError(f"map undefined at {Q.coords} over Q")
    return normalize(vals)


# Exact iterates grow doubly exponentially in height (~d^n bits), so cap how
# far plain calls will iterate; D(m) work never needs more than ~16.
MAX_EXACT_ITERATES = 24


def exact_orbit(phi, P: ProjPointQ, n: int, cap: int = MAX_EXACT_ITERATES) -> list:
    """[P, phi(P), ..., phi^n(P)] with exact coordinates."""
    if n > cap:
        raise ValueError(f"{n} exact iterates exceeds the cap {cap}")
    points = [P]
    for k in range(n):
        try:
            points.append(eval_exact(phi, points[-1]))
        except IndeterminatePointError as exc:
            raise IndeterminatePointError(f"iterate {k + 1}: {exc}") from None
    return points


def is_preperiodic(phi, P: ProjPointQ, max_steps: int = 64) -> bool:
    """True if the exact forward orbit revisits a point within max_steps.

    Once the height passes a generous cutoff the orbit of a degree >= 2 map
    cannot return, so the scan exits early and reports an infinite orbit.
    """
    seen = {P.coords}
    Q = P
    for _ in range(max_steps):
        Q = eval_exact(phi, Q)
        if Q.coords in seen:
            return True
        if max(abs(c) for c in Q.coords) > 10**40:
            return False
        seen.add(Q.coords)
    return False


# ---------------------------------------------------------------------------
# Text form of maps.
#
#   map P1 affine c0 c1 ... cd
#   map PN <N> <d> ; <terms of F_0> ; ... ; <terms of F_N>
#
# where each F_i line is a flat list of terms, each term being
# "coeff e0 e1 ... eN". Lines may be separated by newlines or ';'.
# ---------------------------------------------------------------------------


def _int_token(tok, line_no, tok_no):
    try:
        return int(tok)
    except ValueError:
        raise MapParseError(f"expected integer, got {tok!r}", line_no, tok_no) from None


def parse_map_block(text: str):
    """Parse the map grammar; returns AffinePolyMap or ProjectiveMorphism."""
    lines = [ln.strip() for ln in text.replace(";", "\n").splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MapParseError("empty map description", 1, 1)
    head = lines[0].split()
    if head[0] != "map":
        raise MapParseError(f"expected 'map', got {head[0]!r}", 1, 1)
    if len(head) < 2:
        raise MapParseError("missing space designator (P1 or PN)", 1, 2)
    if head[1] == "P1" and len(head) >= 3 and head[2] == "affine":
        coeffs = [_int_token(t, 1, i + 4) for i, t in enumerate(head[3:])]
        if len(coeffs) < 2:
            raise MapParseError("affine map needs at least c0 c1", 1, 4)
        if coeffs[-1] == 0:
            raise MapParseError("leading coefficient is zero", 1, len(head))
        return AffinePolyMap(tuple(coeffs))
    if head[1] == "PN":
        if len(head) != 4:
            raise MapParseError("expected: map PN <N> <d>", 1, len(head) + 1)
        N = _int_token(head[2], 1, 3)
        d = _int_token(head[3], 1, 4)
        if len(lines) != N + 2:
            raise MapParseError(
                f"expected {N + 1} polynomial lines, got {len(lines) - 1}", len(lines), 1
            )
        polys = []
        for i, ln in enumerate(lines[1:], start=2):
            toks = ln.split()
            if len(toks) % (N + 2) != 0:
                raise MapParseError(
                    f"terms must come in groups of {N + 2} integers", i, len(toks)
                )
            terms = []
            for j in range(0, len(toks), N + 2):
                coeff = _int_token(toks[j], i, j + 1)
                exps = tuple(_int_token(t, i, j + 2 + k) for k, t in enumerate(toks[j + 1 : j + N + 2]))
                if coeff:
                    terms.append((exps, coeff))
            polys.append(tuple(terms))
        return ProjectiveMorphism(dim=N, degree=d, polys=tuple(polys))
    raise MapParseError(f"unknown space designator {head[1]!r}", 1, 2)


def describe_map(phi) -> str:
    """Stable one-line text form; affine maps render as a polynomial in z."""
    if isinstance(phi, AffinePolyMap):
        parts = []
        for k in range(phi.degree, -1, -1):
            c = phi.coeffs[k]
            if not c:
                continue
            if k == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                term = f"{mag}z" + (f"^{k}" if k > 1 else "")
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)
    lines = [f"map PN {phi.dim} {phi.degree}"]
    for terms in phi.polys:
        flat = []
        for exps, coeff in terms:
            flat.append(str(coeff))
            flat.extend(str(e) for e in exps)
        lines.append(" ".join(flat))
    return " ; ".join(lines)


def describe_point(P: ProjPointQ) -> str:
    if len(P.coords) == 2:
        a, b = P.coords
        if b:
            sign = -1 if b < 0 else 1
            return str(sign * a) if abs(b) == 1 else f"{sign * a}/{abs(b)}"
    return "[" + ":".join(str(c) for c in P.coords) + "]"
