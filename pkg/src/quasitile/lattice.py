"""Embedded lattices, projection schemes and cyclic point-group machinery.

Lattices are stored with exact rational bases in an ambient Euclidean space
(the root lattices A_n sit in the sum-zero hyperplane of Z^(n+1)), so
Gram matrices and reciprocal bases are rational. A :class:`ProjectionScheme`
attaches to each basis vector its images in a physical frame and an
internal frame; those images carry the quadratic irrationalities.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import mpmath
import numpy as np

from . import linalg
from .exactnum import QuadValue, Scalar, TAU, to_float
from .geometry import Frame, cartesian_frame, vadd, vscale

CATALOGUE_SCHEMA = "quasitile.lattice-catalogue/1"


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddedLattice:
    """Lattice spanned by the rows of ``basis`` (exact rationals)."""

    name: str
    basis: tuple
    holes: tuple = ()

    def __post_init__(self):
        b = tuple(tuple(Fraction(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", b)
        if linalg.det(self.gram) == 0:
            raise ValueError(f"basis of {self.name} is linearly dependent")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def ambient_dimension(self) -> int:
        return len(self.basis[0])

    @cached_property
    def gram(self) -> tuple:
        return tuple(
            tuple(sum((x * y for x, y in zip(a, b)), Fraction(0)) for b in self.basis)
            for a in self.basis
        )

    @cached_property
    def gram_inverse(self) -> tuple:
        return tuple(tuple(row) for row in linalg.inverse(self.gram))

    @cached_property
    def reciprocal_basis(self) -> tuple:
        """Rows ``b_i`` with ``<b_i, a_j> = delta_ij`` inside the lattice span."""
        gi = self.gram_inverse
        n = self.dimension
        return tuple(
            tuple(
                sum((gi[i][k] * self.basis[k][c] for k in range(n)), Fraction(0))
                for c in range(self.ambient_dimension)
            )
            for i in range(n)
        )

    def covolume_squared(self) -> Fraction:
        return Fraction(linalg.det(self.gram))

    def ambient(self, coords: Sequence[Scalar]) -> tuple:
        """Ambient coordinates of the point with lattice coordinates ``coords``."""
        return tuple(
            sum((coords[k] * self.basis[k][c] for k in range(self.dimension)), Fraction(0))
            for c in range(self.ambient_dimension)
        )

    def coords_of(self, x: Sequence[Scalar]) -> tuple:
        """Lattice coordinates of an ambient vector lying in the lattice span."""
        pairing = [sum((a * xi for a, xi in zip(row, x)), Fraction(0)) for row in self.basis]
        return tuple(linalg.matvec(self.gram_inverse, pairing))

    def inner(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        """Inner product of two vectors given in lattice coordinates."""
        g = self.gram
        total: Scalar = Fraction(0)
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j, vj in enumerate(v):
                if vj != 0 and g[i][j] != 0:
                    total = total + ui * g[i][j] * vj
        return total

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "ambient_dimension": self.ambient_dimension,
            "basis": [[str(x) for x in row] for row in self.basis],
            "reciprocal_basis": [[str(x) for x in row] for row in self.reciprocal_basis],
            "gram": [[str(x) for x in row] for row in self.gram],
            "holes": [[str(x) for x in h] for h in self.holes],
        }


def _unit(n: int, i: int) -> list[int]:
    return [int(j == i) for j in range(n)]


def zn_lattice(n: int) -> EmbeddedLattice:
    return EmbeddedLattice(f"Z{n}", tuple(tuple(_unit(n, i)) for i in range(n)))


def an_lattice(n: int) -> EmbeddedLattice:
    """Root lattice A_n in the sum-zero hyperplane of Z^(n+1), simple-root basis."""
    rows = []
    for i in range(n):
        v = [0] * (n + 1)
        v[i], v[i + 1] = 1, -1
        rows.append(tuple(v))
    # holes: glue vectors [k] in lattice coordinates, one per class
    holes = []
    for k in range(1, n + 1):
        amb = [Fraction(n + 1 - k, n + 1)] * k + [Fraction(-k, n + 1)] * (n + 1 - k)
        holes.append(amb)
    lat = EmbeddedLattice(f"A{n}", tuple(rows))
    return EmbeddedLattice(lat.name, lat.basis, tuple(lat.coords_of(h) for h in holes))


def d6_lattice() -> EmbeddedLattice:
    rows = [(1, 1, 0, 0, 0, 0), (1, -1, 0, 0, 0, 0)]
    for i in range(1, 5):
        v = [0] * 6
        v[i], v[i + 1] = 1, -1
        rows.append(tuple(v))
    lat = EmbeddedLattice("D6", tuple(rows))
    half = Fraction(1, 2)
    hole_a = (1, 0, 0, 0, 0, 0)
    hole_b = (half,) * 6
    hole_c = (half,) * 5 + (-half,)
    return EmbeddedLattice(
        "D6", lat.basis, tuple(lat.coords_of(h) for h in (hole_a, hole_b, hole_c))
    )


# ---------------------------------------------------------------------------
# point groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointGroupRep:
    """Point group given by generator matrices acting on lattice coordinates.

    Column j of a generator holds the lattice coordinates of the image of
    basis vector j, so ``R @ z`` maps coordinate vectors.
    """

    group: str
    generators: tuple
    gram: tuple = ()

    def __post_init__(self):
        gens = tuple(tuple(tuple(Fraction(x) for x in row) for row in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)

    @property
    def order_hint(self) -> int | None:
        if self.group.startswith("C") and self.group[1:].isdigit():
            return int(self.group[1:])
        return None

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for g in self.generators for row in g for x in row)

    def is_orthogonal(self) -> bool:
        if not self.gram:
            return True
        for g in self.generators:
            gt = linalg.transpose(g)
            lhs = linalg.matmul(linalg.matmul(gt, self.gram), g)
            if lhs != [list(r) for r in self.gram]:
                return False
        return True


def regular_representation(n: int) -> PointGroupRep:
    """Regular representation of C_n: the n x n cyclic permutation matrix."""
    if n < 1:
        raise ValueError("group order must be >= 1")
    perm = [[int((i - j) % n == 1) if n > 1 else 1 for j in range(n)] for i in range(n)]
    rep = PointGroupRep(f"C{n}", (perm,), zn_lattice(n).gram)
    assert rep.is_integral() and rep.is_orthogonal()
    return rep


def matrix_power(m, k: int):
    result = linalg.identity(len(m))
    for _ in range(k):
        result = linalg.matmul(m, result)
    return result


@dataclass(frozen=True)
class RotationBlock:
    """One invariant block of an orthogonal cyclic action.

    ``turn`` is the rotation angle as a fraction of a full turn (1D blocks
    have turn 0 or 1/2); ``basis`` are orthonormal columns in the
    Gram-orthonormal coordinates.
    """

    turn: Fraction
    dim: int
    matrix: np.ndarray
    basis: np.ndarray

    @property
    def angle(self) -> float:
        return 2 * math.pi * float(self.turn)


def block_reduce_cyclic(rep: PointGroupRep) -> tuple[list[RotationBlock], np.ndarray]:
    """Split a cyclic orthogonal action into rotation planes and 1D blocks.

    Returns the blocks (planes first, by increasing angle) and the orthogonal
    change of basis ``Q`` (columns) in Gram-orthonormal coordinates, such that
    ``Q.T @ R_orth @ Q`` is block diagonal.
    """
    if len(rep.generators) != 1 or rep.order_hint is None:
        raise ValueError("block reduction needs a cyclic group with one generator")
    n_order = rep.order_hint
    r = np.array([[float(x) for x in row] for row in rep.generators[0]])
    dim = r.shape[0]
    gram = np.array([[float(x) for x in row] for row in rep.gram]) if rep.gram else np.eye(dim)
    chol = np.linalg.cholesky(gram)  # gram = L L^T; y = L^T z orthonormal coords
    r_orth = chol.T @ r @ np.linalg.inv(chol.T)
    if not np.allclose(r_orth.T @ r_orth, np.eye(dim), atol=1e-10):
        raise ValueError("generator is not orthogonal for the given Gram matrix")
    evals, evecs = np.linalg.eig(r_orth)
    turns = np.angle(evals) / (2 * math.pi)
    groups: dict[Fraction, list[int]] = {}
    for i, t in enumerate(turns):
        f = Fraction(round(t * n_order) % n_order, n_order)
        if abs(t * n_order - round(t * n_order)) > 1e-6:
            raise ValueError("eigen-angle is not a multiple of 2*pi/n")
        groups.setdefault(f, []).append(i)
    blocks: list[RotationBlock] = []
    for f in sorted(groups):
        if f > Fraction(1, 2):
            continue
        idx = groups[f]
        vecs = evecs[:, idx]
        if f in (Fraction(0), Fraction(1, 2)):
            q, _ = np.linalg.qr(np.real(vecs))
            for k in range(q.shape[1]):
                v = q[:, k : k + 1]
                blocks.append(RotationBlock(f, 1, v.T @ r_orth @ v, v))
            continue
        q, _ = np.linalg.qr(vecs)
        for k in range(q.shape[1]):
            v = q[:, k]
            plane = np.stack([np.real(v), np.imag(v)], axis=1) * math.sqrt(2)
            plane, _ = np.linalg.qr(plane)
            m = plane.T @ r_orth @ plane
            if m[1, 0] < 0:  # orient so that the block is a positive rotation
                plane[:, 1] *= -1
                m = plane.T @ r_orth @ plane
            blocks.append(RotationBlock(f, 2, m, plane))
    blocks.sort(key=lambda b: (-b.dim, b.turn))
    q_full = np.concatenate([b.basis for b in blocks], axis=1)
    return blocks, q_full


# ---------------------------------------------------------------------------
# crystallographic restriction
# ---------------------------------------------------------------------------


def _cos_sum_sign(coeffs: dict[int, int], n: int) -> int:
    """Exact sign of sum_k c_k cos(2 pi k / n) for integer c_k.

    The sum is an algebraic integer of degree <= phi(n)/2 whose conjugates
    are bounded by C = sum |c_k|; if nonzero its modulus is at least
    C**(1 - deg). Evaluating at a precision well past that bound decides it.
    """
    c_total = sum(abs(c) for c in coeffs.values()) or 1
    deg = max(1, euler_phi(n) // 2)
    bound_digits = int((deg - 1) * math.log10(max(c_total, 2))) + 20
    with mpmath.workdps(bound_digits + 20):
        val = mpmath.fsum(c * mpmath.cos(2 * mpmath.pi * k / n) for k, c in coeffs.items())
        if abs(val) < mpmath.mpf(10) ** (-bound_digits):
            return 0
        return 1 if val > 0 else -1


def _norm2_coeffs(v: dict[int, int], n: int) -> dict[int, int]:
    # |sum_j v_j w^j|^2 = sum_{j,l} v_j v_l cos(2 pi (j-l)/n)
    out: dict[int, int] = {}
    for j, a in v.items():
        for l, b in v.items():
            k = (j - l) % n
            out[k] = out.get(k, 0) + a * b
    return out


def restriction_witness(n_fold: int) -> tuple[bool, tuple | None]:
    """Run the minimal-distance argument for an ``n_fold`` rotation.

    Two points at unit distance, 0 and 1, are rotated about each other by
    multiples of 2 pi / n. Points are integer combinations of powers of
    w = exp(2 pi i / n). Returns (compatible, closer_pair_or_None).
    """
    if n_fold < 1:
        raise ValueError("rotation order must be >= 1")
    n = n_fold
    pts: list[dict[int, int]] = [{}, {0: 1}]
    for k in range(1, n):
        pts.append({k % n: 1})  # rotate 1 about 0
        q = {0: 1}
        q[k % n] = q.get(k % n, 0) - 1  # rotate 0 about 1: 1 - w^k
        pts.append({j: c for j, c in q.items() if c})
    # Distances are decided in floating point when they are clearly away
    # from the critical values; anything near them goes to the certified
    # evaluation.
    def as_complex(p: dict[int, int]) -> complex:
        return sum(c * cmath.exp(2j * math.pi * k / n) for k, c in p.items())

    unique: list[dict[int, int]] = []
    for p in pts:
        dup = False
        for u in unique:
            d2 = abs(as_complex(p) - as_complex(u)) ** 2
            if d2 < 1e-6 and _cos_sum_sign(_norm2_coeffs(_diff(p, u), n), n) == 0:
                dup = True
                break
        if not dup:
            unique.append(p)
    for i in range(len(unique)):
        for j in range(i + 1, len(unique)):
            d2f = abs(as_complex(unique[i]) - as_complex(unique[j])) ** 2 - 1
            if d2f > 1e-6:
                continue
            if d2f < -1e-6:
                return False, (unique[i], unique[j])
            d2 = _norm2_coeffs(_diff(unique[i], unique[j]), n)
            d2[0] = d2.get(0, 0) - 1
            if _cos_sum_sign(d2, n) < 0:
                return False, (unique[i], unique[j])
    # closure: Z + Z w must be a lattice, i.e. 2 cos(2 pi/n) is an integer
    two_cos = 2 * math.cos(2 * math.pi / n)
    k = round(two_cos)
    if _cos_sum_sign({1: 2, 0: -k}, n) != 0:
        return False, None
    return True, None


def _diff(p: dict[int, int], q: dict[int, int]) -> dict[int, int]:
    out = dict(p)
    for j, c in q.items():
        out[j] = out.get(j, 0) - c
    return {j: c for j, c in out.items() if c}


def crystallographic_restriction(n_fold: int) -> bool:
    """True iff an ``n_fold`` rotation is compatible with a planar lattice."""
    return restriction_witness(n_fold)[0]


def euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def minimal_embedding_dimension(n_fold: int) -> int:
    """Dimension of the smallest lattice carrying an ``n_fold`` rotation."""
    if n_fold < 1:
        raise ValueError("rotation order must be >= 1")
    if n_fold <= 2:
        return 1
    return euler_phi(n_fold)


# ---------------------------------------------------------------------------
# projection schemes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionScheme:
    """Lattice plus exact parallel/perpendicular images of its basis."""

    name: str
    lattice: EmbeddedLattice
    par_frame: Frame
    perp_frame: Frame
    par_images: tuple
    perp_images: tuple
    generator: PointGroupRep | None = None

    @property
    def n(self) -> int:
        return self.lattice.dimension

    @property
    def m(self) -> int:
        return self.par_frame.dim

    @property
    def d(self) -> int:
        return self.par_frame.d

    def project(self, n_vec: Sequence[Scalar]) -> tuple[tuple, tuple]:
        if len(n_vec) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(n_vec)}")
        par = self.par_frame.zero()
        perp = self.perp_frame.zero()
        for c, a, b in zip(n_vec, self.par_images, self.perp_images):
            if c != 0:
                par = vadd(par, vscale(c, a))
                perp = vadd(perp, vscale(c, b))
        return par, perp

    def par(self, n_vec: Sequence[Scalar]) -> tuple:
        return self.project(n_vec)[0]

    def perp(self, n_vec: Sequence[Scalar]) -> tuple:
        return self.project(n_vec)[1]

    @cached_property
    def combined_exact(self) -> list[list[Scalar]]:
        """(n x n) matrix whose column j stacks par and perp images of basis j."""
        rows = []
        for k in range(self.m):
            rows.append([img[k] for img in self.par_images])
        for k in range(self.n - self.m):
            rows.append([img[k] for img in self.perp_images])
        return rows

    @cached_property
    def par_matrix(self) -> np.ndarray:
        return np.array([[to_float(img[k]) for img in self.par_images] for k in range(self.m)])

    @cached_property
    def perp_matrix(self) -> np.ndarray:
        return np.array(
            [[to_float(img[k]) for img in self.perp_images] for k in range(self.n - self.m)]
        )

    @cached_property
    def combined_float(self) -> np.ndarray:
        return np.vstack([self.par_matrix, self.perp_matrix])

    def covolume(self) -> Scalar:
        """|det| of the combined map: lattice covolume in frame units."""
        det = linalg.det(self.combined_exact)
        return det if _sgn(det) >= 0 else -det

    def is_injective(self) -> bool:
        return linalg.det(self.combined_exact) != 0

    def injectivity_box_search(self, bound: int) -> list[tuple]:
        """Nonzero integer vectors in [-bound, bound]^n with both images zero."""
        n = self.n
        rng = np.arange(-bound, bound + 1)
        grids = np.meshgrid(*([rng] * n), indexing="ij")
        z = np.stack([g.ravel() for g in grids], axis=1)
        img = z @ self.combined_float.T
        near = np.where(np.abs(img).max(axis=1) < 1e-9)[0]
        out = []
        for idx in near:
            vec = tuple(int(x) for x in z[idx])
            if any(vec):
                par, perp = self.project(vec)
                if all(x == 0 for x in par + perp):
                    out.append(vec)
        return out

    def par_is_irrational(self) -> bool:
        """E_par is the kernel of the perpendicular map; test it against the lattice."""
        rows = [[img[k] for img in self.perp_images] for k in range(self.n - self.m)]
        kernel = linalg.nullspace(rows, self.n)
        return not is_rational_subspace(self.lattice, kernel, coords="lattice")

    @cached_property
    def _lift_inverse(self):
        # rational equations: each physical coordinate splits into its a and b parts
        eqs = []
        for k in range(self.m):
            for part in ("a", "b"):
                eqs.append([_part(img[k], part) for img in self.par_images])
        if len(eqs) != self.n or linalg.det(eqs) == 0:
            return None
        return linalg.inverse(eqs)

    def lift(self, par_point: Sequence[Scalar], integral: bool = True) -> tuple | None:
        """Lattice coordinates of the unique preimage of a module point.

        With ``integral`` the result must be an integer vector (else ``None``);
        otherwise rational coordinates are returned, e.g. for projected holes.
        """
        inv = self._lift_inverse
        if inv is None:
            raise ValueError("parallel images are not rationally independent")
        rhs = []
        for k in range(self.m):
            rhs.append(_part(par_point[k], "a"))
            rhs.append(_part(par_point[k], "b"))
        sol = tuple(Fraction(x) for x in linalg.matvec(inv, rhs))
        if not integral:
            return sol
        if any(x.denominator != 1 for x in sol):
            return None
        return tuple(int(x) for x in sol)


def _part(x: Scalar, which: str) -> Fraction:
    if isinstance(x, QuadValue):
        return Fraction(x.a if which == "a" else x.b)
    return Fraction(x) if which == "a" else Fraction(0)


def _sgn(x: Scalar) -> int:
    from .exactnum import sign

    return sign(x)


def module_project(scheme: ProjectionScheme, n_vec: Sequence[int]) -> tuple[tuple, tuple]:
    return scheme.project(n_vec)


# --- concrete schemes ---------------------------------------------------------


def _q(a, b, d) -> QuadValue:
    return QuadValue(a, b, d)


def ab_scheme() -> ProjectionScheme:
    """Z^4 with a_k at 45(k-1) degrees and a*_k at 135(k-1) degrees."""
    s = _q(0, Fraction(1, 2), 2)  # sqrt(2)/2
    one, zero = _q(1, 0, 2), _q(0, 0, 2)
    par = ((one, zero), (s, s), (zero, one), (-s, s))
    perp = ((one, zero), (-s, s), (zero, -one), (s, s))
    gen = [[0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    lat = zn_lattice(4)
    frame_par = cartesian_frame(2, 2, "ab-par")
    frame_perp = cartesian_frame(2, 2, "ab-perp")
    return ProjectionScheme(
        "ab", lat, frame_par, frame_perp, par, perp, PointGroupRep("C8", (gen,), lat.gram)
    )


def _zeta_powers() -> list[tuple]:
    """Fifth roots of unity in the oblique frame (1, zeta), coordinates in Q(tau)."""
    t = TAU
    one, zero = _q(1, 0, 5), _q(0, 0, 5)
    return [
        (one, zero),
        (zero, one),
        (-one, t - 1),
        (1 - t, 1 - t),
        (t - 1, -one),
    ]


def pentagonal_frame(name: str) -> Frame:
    c = (TAU - 1) * Fraction(1, 2)  # cos 72
    one = _q(1, 0, 5)
    gram = ((one, c), (c, one))
    cart = ((1.0, 0.0), (math.cos(2 * math.pi / 5), math.sin(2 * math.pi / 5)))
    return Frame(name, 5, gram, cart)


def penrose_scheme() -> ProjectionScheme:
    """A4 in root basis; e_k -> zeta^k (parallel) and zeta^(2k) (perpendicular)."""
    z = _zeta_powers()
    lat = an_lattice(4)
    par = tuple(
        tuple(a - b for a, b in zip(z[i], z[(i + 1) % 5])) for i in range(4)
    )
    perp = tuple(
        tuple(a - b for a, b in zip(z[(2 * i) % 5], z[(2 * i + 2) % 5])) for i in range(4)
    )
    # cyclic shift e_k -> e_(k+1) on the root basis; columns are images
    gen = [
        [0, 0, 0, -1],
        [1, 0, 0, -1],
        [0, 1, 0, -1],
        [0, 0, 1, -1],
    ]
    return ProjectionScheme(
        "penrose",
        lat,
        pentagonal_frame("a4-par"),
        pentagonal_frame("a4-perp"),
        par,
        perp,
        PointGroupRep("C5", (gen,), lat.gram),
    )


def fibonacci_scheme() -> ProjectionScheme:
    """Z^2 sliced along the line of slope tau."""
    lat = zn_lattice(2)
    t = TAU
    one = _q(1, 0, 5)
    par = ((one,), (t,))
    perp = ((-t,), (one,))
    frame_par = cartesian_frame(5, 1, "fib-par")
    frame_perp = cartesian_frame(5, 1, "fib-perp")
    gen = [[-1, 0], [0, -1]]
    return ProjectionScheme(
        "fibonacci", lat, frame_par, frame_perp, par, perp, PointGroupRep("C2", (gen,), lat.gram)
    )


SCHEMES: dict[str, Callable[[], ProjectionScheme]] = {
    "ab": ab_scheme,
    "penrose": penrose_scheme,
    "ttt": penrose_scheme,
    "fibonacci": fibonacci_scheme,
}


# ---------------------------------------------------------------------------
# rational subspaces
# ---------------------------------------------------------------------------


def is_rational_subspace(
    lattice: EmbeddedLattice, span_vectors: Sequence[Sequence[Scalar]], coords: str = "ambient"
) -> bool:
    """True iff span(span_vectors) is an intersection of hyperplanes Y_b, b in the reciprocal lattice.

    Vectors are ambient (default) or lattice coordinates. Reciprocal vectors
    in reciprocal coordinates annihilating the span form the null space of
    the coordinate matrix; the subspace is rational iff that null space has a
    rational basis, which the (unique) reduced echelon form reveals.
    """
    if coords == "ambient":
        z = [lattice.coords_of(v) for v in span_vectors]
        for v, zz in zip(span_vectors, z):
            if tuple(lattice.ambient(zz)) != tuple(v):
                raise ValueError("span vector does not lie in the lattice span")
    else:
        z = [tuple(v) for v in span_vectors]
    if linalg.rank(z) != len(z):
        raise ValueError("span vectors are linearly dependent")
    n = lattice.dimension
    annihilator = linalg.nullspace(z, n) if z else linalg.identity(n)
    if not annihilator:
        return True
    r, _ = linalg.rref(annihilator)
    return all(linalg.is_rational(x) for row in r for x in row)


# ---------------------------------------------------------------------------
# Bohr restriction
# ---------------------------------------------------------------------------


@dataclass
class FourierSeries:
    """Lattice-periodic function sum_b amp_b exp(2 pi i <b, x>), b in the reciprocal lattice."""

    lattice: EmbeddedLattice
    modes: list  # (reciprocal coords m (ints), complex amplitude)

    @classmethod
    def from_ambient(cls, lattice: EmbeddedLattice, terms) -> FourierSeries:
        modes = []
        for b, amp in terms:
            m = [sum((Fraction(x) * y for x, y in zip(b, a)), Fraction(0)) for a in lattice.basis]
            if any(x.denominator != 1 for x in m):
                raise ValueError(f"{b} is not a reciprocal-lattice vector")
            recon = lattice_reciprocal_vector(lattice, m)
            if tuple(recon) != tuple(Fraction(x) for x in b):
                raise ValueError(f"{b} is not a reciprocal-lattice vector")
            modes.append((tuple(int(x) for x in m), complex(amp)))
        return cls(lattice, modes)

    def __call__(self, x_ambient: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x_ambient)
        out = np.zeros(x.shape[0], dtype=complex)
        for m, amp in self.modes:
            b = np.array([float(v) for v in lattice_reciprocal_vector(self.lattice, m)])
            out += amp * np.exp(2j * math.pi * (x @ b))
        return out


def lattice_reciprocal_vector(lattice: EmbeddedLattice, m: Sequence[int]) -> tuple:
    rb = lattice.reciprocal_basis
    return tuple(
        sum((m[i] * rb[i][c] for i in range(lattice.dimension)), Fraction(0))
        for c in range(lattice.ambient_dimension)
    )


@dataclass
class QuasiperiodicFunction:
    """f^qp(x_par) = f^p(x_par + c_perp), evaluated through projected frequencies."""

    scheme: ProjectionScheme
    c_perp: np.ndarray
    frequencies: np.ndarray  # (modes, m): coefficient of x_par in the phase
    phases: np.ndarray  # (modes,): constant phase from c_perp
    amplitudes: np.ndarray

    def __call__(self, x_par) -> np.ndarray:
        x = np.asarray(x_par, dtype=float).reshape(-1, self.scheme.m)
        arg = x @ self.frequencies.T + self.phases
        return (np.exp(2j * math.pi * arg) * self.amplitudes).sum(axis=1)

    def lift(self, x_par) -> np.ndarray:
        """Ambient coordinates of the lifted points x_par + c_perp."""
        x = np.asarray(x_par, dtype=float).reshape(-1, self.scheme.m)
        rhs = np.hstack([x, np.tile(self.c_perp, (x.shape[0], 1))])
        z = np.linalg.solve(self.scheme.combined_float, rhs.T).T
        basis = np.array([[float(v) for v in row] for row in self.scheme.lattice.basis])
        return z @ basis


def bohr_restrict(
    f_periodic: FourierSeries, scheme: ProjectionScheme, c_perp: Sequence[float]
) -> QuasiperiodicFunction:
    """Restrict a finite Fourier series on E^n to the affine plane E_par + c_perp."""
    c = np.asarray(c_perp, dtype=float).reshape(scheme.n - scheme.m)
    inv = np.linalg.inv(scheme.combined_float)  # lattice coords = inv @ (x_par, x_perp)
    freqs, phases, amps = [], [], []
    for m, amp in f_periodic.modes:
        row = np.asarray(m, dtype=float) @ inv
        freqs.append(row[: scheme.m])
        phases.append(row[scheme.m :] @ c)
        amps.append(amp)
    return QuasiperiodicFunction(
        scheme,
        c,
        np.array(freqs).reshape(-1, scheme.m),
        np.array(phases),
        np.array(amps, dtype=complex),
    )


# ---------------------------------------------------------------------------
# catalogue
# ---------------------------------------------------------------------------


def icosahedral_fivefold_z6() -> list[list[int]]:
    """Signed permutation of Z^6 induced by a 5-fold icosahedral rotation.

    The six basis vectors are sent to the six 5-fold axes; the rotation about
    the first axis permutes the axes up to sign.
    """
    t = (1 + math.sqrt(5)) / 2
    axes = np.array(
        [(0, 1, t), (0, -1, t), (1, t, 0), (-1, t, 0), (t, 0, 1), (-t, 0, 1)], dtype=float
    )
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    u = axes[0]
    ang = 2 * math.pi / 5
    k = np.array([[0, -u[2], u[1]], [u[2], 0, -u[0]], [-u[1], u[0], 0]])
    rot = np.eye(3) + math.sin(ang) * k + (1 - math.cos(ang)) * (k @ k)
    mat = [[0] * 6 for _ in range(6)]
    for j, a in enumerate(axes):
        img = rot @ a
        dots = axes @ img
        i = int(np.argmax(np.abs(dots)))
        if abs(abs(dots[i]) - 1) > 1e-9:
            raise AssertionError("rotation does not permute the axes")
        mat[i][j] = 1 if dots[i] > 0 else -1
    return mat


def catalogue() -> dict[str, EmbeddedLattice]:
    return {
        "Z2": zn_lattice(2),
        "Z4": zn_lattice(4),
        "A2": an_lattice(2),
        "A4": an_lattice(4),
        "D6": d6_lattice(),
    }


def catalogue_generators() -> dict[str, list]:
    ab = ab_scheme().generator
    pen = penrose_scheme().generator
    rot3 = [[0, -1], [1, -1]]  # A2: alpha1 -> alpha2, alpha2 -> -(alpha1 + alpha2)
    return {
        "Z2": [[[0, -1], [1, 0]]],
        "Z4": [list(map(list, ab.generators[0]))],
        "A2": [rot3],
        "A4": [list(map(list, pen.generators[0]))],
        "D6": [icosahedral_fivefold_z6()],
    }


def catalogue_json() -> str:
    """The lattice catalogue serialised under :data:`CATALOGUE_SCHEMA`."""
    gens = catalogue_generators()
    entries = []
    for name, lat in catalogue().items():
        entry = lat.to_dict()
        entry["point_group_generators"] = [
            [[str(Fraction(x)) for x in row] for row in g] for g in gens[name]
        ]
        if name == "D6":
            entry["generator_coordinates"] = "ambient"
        else:
            entry["generator_coordinates"] = "lattice"
        entries.append(entry)
    return json.dumps({"schema": CATALOGUE_SCHEMA, "lattices": entries}, indent=2, sort_keys=True)
