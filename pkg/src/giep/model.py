"""Problem data model: target spectrum, matrix family, and disc labeling.

The target spectrum holds k complex-conjugate pairs and l reals, all
distinct.  Its seed matrix is the direct sum of 2x2 rotation-scaled blocks
[[lam, mu], [-mu, lam]] and 1x1 real blocks, which realizes the spectrum
exactly.  A pattern places free parameters into a matrix family M:

* x_j on the two diagonal positions of matched block j,
* y_j / -y_j on its off-diagonal positions,
* z_j on the trailing diagonal position 2k+j,
* u_r at slot (i_r, j_r) and, for bidirected slots, omega_r at (j_r, i_r).

Eigenvalues of matrices near the seed are identified by which disc of the
disc system they fall in; the labeled (lambda, mu, gamma) coordinates are
the quantities the Newton corrector drives to the target.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import BadFormat, DegenerateSpectrum, DimensionMismatch, DiscViolation


@dataclass(frozen=True)
class Spectrum:
    """Target eigenvalues: pairs (lam_j, mu_j) meaning lam_j +/- mu_j*i, plus reals.

    All 2k+l induced values must be pairwise distinct and every mu_j > 0.
    """

    pairs: tuple[tuple[float, float], ...]
    reals: tuple[float, ...]

    def __post_init__(self):
        pairs = tuple((float(a), float(b)) for a, b in self.pairs)
        reals = tuple(float(g) for g in self.reals)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "reals", reals)
        vals = [x for p in pairs for x in p] + list(reals)
        if not all(np.isfinite(vals)):
            raise ValueError("spectrum values must be finite")
        if any(mu <= 0.0 for _, mu in pairs):
            raise ValueError("mu must be positive for every conjugate pair")
        if self.n < 1:
            raise ValueError("spectrum must contain at least one value")
        points = self.values()
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                if points[i] == points[j]:
                    raise DegenerateSpectrum(
                        f"duplicate spectrum value {points[i]}"
                    )

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def l(self) -> int:
        return len(self.reals)

    @property
    def n(self) -> int:
        return 2 * self.k + self.l

    def values(self) -> np.ndarray:
        """All n spectrum points: plus values, minus values, then reals."""
        plus = [complex(a, b) for a, b in self.pairs]
        minus = [complex(a, -b) for a, b in self.pairs]
        return np.array(plus + minus + [complex(g) for g in self.reals], dtype=complex)

    def inf_norm(self) -> float:
        """Largest modulus among the spectrum points."""
        return float(np.abs(self.values()).max())

    def target_coordinates(self) -> "LabeledValue":
        """The (lambda, mu, gamma) coordinate vector this spectrum prescribes."""
        return LabeledValue(
            lam=np.array([a for a, _ in self.pairs], dtype=float),
            mu=np.array([b for _, b in self.pairs], dtype=float),
            gamma=np.array(self.reals, dtype=float),
        )

    @classmethod
    def from_eigenvalues(cls, values) -> "Spectrum":
        """Build a Spectrum from a conjugate-closed set of computed eigenvalues."""
        vals = np.atleast_1d(np.asarray(values, dtype=complex))
        plus = sorted((v for v in vals if v.imag > 0), key=lambda z: (z.real, z.imag))
        minus = sorted((v for v in vals if v.imag < 0), key=lambda z: (z.real, -z.imag))
        if len(plus) != len(minus) or any(
            p.real != m.real or p.imag != -m.imag for p, m in zip(plus, minus)
        ):
            raise ValueError("eigenvalues are not closed under conjugation")
        reals = sorted(v.real for v in vals if v.imag == 0.0)
        return cls(
            pairs=tuple((v.real, v.imag) for v in plus),
            reals=tuple(reals),
        )


@dataclass(frozen=True)
class Pattern:
    """Placement of the free parameters for a graph on n = 2k+l vertices.

    ``slots[r] = (i_r, j_r)`` hosts u_r at position (i_r, j_r); when
    ``bidirected[r]`` is set, omega_r lives at (j_r, i_r) and i_r < j_r.
    Slots may not touch the diagonal or the interior of a matched block.
    """

    n: int
    k: int
    slots: tuple[tuple[int, int], ...] = ()
    bidirected: tuple[bool, ...] = ()

    def __post_init__(self):
        if self.n < 1 or self.k < 0 or 2 * self.k > self.n:
            raise ValueError(f"invalid sizes n={self.n}, k={self.k}")
        if len(self.slots) != len(self.bidirected):
            raise ValueError("slots and bidirected flags must align")
        block = {
            pos
            for j in range(1, self.k + 1)
            for pos in ((2 * j - 1, 2 * j), (2 * j, 2 * j - 1))
        }
        seen_pairs: set[tuple[int, int]] = set()
        for (i, j), bi in zip(self.slots, self.bidirected):
            if not (1 <= i <= self.n and 1 <= j <= self.n) or i == j:
                raise ValueError(f"slot ({i},{j}) out of range or on the diagonal")
            if (i, j) in block:
                raise ValueError(f"slot ({i},{j}) collides with a matched block")
            if bi and i >= j:
                raise ValueError(f"bidirected slot ({i},{j}) must have i < j")
            key = (min(i, j), max(i, j))
            if key in seen_pairs:
                raise ValueError(f"duplicate slot for pair {{{i},{j}}}")
            seen_pairs.add(key)

    @property
    def l(self) -> int:
        return self.n - 2 * self.k

    @property
    def m(self) -> int:
        return len(self.slots)

    def edge_positions(self) -> set[tuple[int, int]]:
        """All off-diagonal positions the assembled matrix may fill (1-based)."""
        pos = {
            p
            for j in range(1, self.k + 1)
            for p in ((2 * j - 1, 2 * j), (2 * j, 2 * j - 1))
        }
        for (i, j), bi in zip(self.slots, self.bidirected):
            pos.add((i, j))
            if bi:
                pos.add((j, i))
        return pos


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ParameterPoint:
    """The free parameters (x, y, z, u, omega) of the matrix family.

    For one-directional slots the omega component is carried but never
    written into the matrix.  Arrays are frozen after construction.
    """

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    u: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        for name in ("x", "y", "z", "u", "omega"):
            arr = np.array(getattr(self, name), dtype=float).reshape(-1)
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"parameter vector {name} must be finite")
            object.__setattr__(self, name, _freeze(arr))

    def with_xyz_delta(self, delta: np.ndarray) -> "ParameterPoint":
        """Add a stacked (x, y, z) correction, leaving u and omega untouched."""
        k, n_l = self.x.size, self.z.size
        if delta.shape != (2 * k + n_l,):
            raise DimensionMismatch(
                f"correction has length {delta.size}, expected {2 * k + n_l}"
            )
        return ParameterPoint(
            x=self.x + delta[:k],
            y=self.y + delta[k : 2 * k],
            z=self.z + delta[2 * k :],
            u=self.u,
            omega=self.omega,
        )

    def with_fill(self, u: np.ndarray, omega: np.ndarray) -> "ParameterPoint":
        return ParameterPoint(x=self.x, y=self.y, z=self.z, u=u, omega=omega)


@dataclass(frozen=True)
class DiscSystem:
    """Disjoint discs of a common radius around every spectrum point.

    ``plus_centers`` are the k upper-half-plane centers; the conjugate
    (minus) discs are implicit.  Real centers use the real interval of
    their disc, so a real eigenvalue can never be confused with a complex
    one: the radius stays below every mu_j.
    """

    radius: float
    plus_centers: tuple[complex, ...]
    real_centers: tuple[float, ...]

    def __post_init__(self):
        eps = float(self.radius)
        object.__setattr__(self, "radius", eps)
        object.__setattr__(
            self, "plus_centers", tuple(complex(c) for c in self.plus_centers)
        )
        object.__setattr__(
            self, "real_centers", tuple(float(c) for c in self.real_centers)
        )
        if not (np.isfinite(eps) and eps > 0.0):
            raise ValueError("disc radius must be positive and finite")
        for c in self.plus_centers:
            if not c.imag > eps:
                raise ValueError(
                    f"disc at {c} touches the real axis (radius {eps})"
                )
        cs = self.all_centers()
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if abs(cs[i] - cs[j]) <= 2.0 * eps:
                    raise ValueError(
                        f"discs at {cs[i]} and {cs[j]} are not disjoint"
                    )

    @property
    def k(self) -> int:
        return len(self.plus_centers)

    @property
    def l(self) -> int:
        return len(self.real_centers)

    @property
    def n(self) -> int:
        return 2 * self.k + self.l

    def all_centers(self) -> np.ndarray:
        """Plus centers, conjugate centers, then real centers."""
        plus = list(self.plus_centers)
        minus = [c.conjugate() for c in self.plus_centers]
        return np.array(plus + minus + [complex(c) for c in self.real_centers])


@dataclass(frozen=True, eq=False)
class LabeledValue:
    """Eigenvalue coordinates read off the discs: (lambda, mu, gamma)."""

    lam: np.ndarray
    mu: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        for name in ("lam", "mu", "gamma"):
            arr = np.array(getattr(self, name), dtype=float).reshape(-1)
            object.__setattr__(self, name, _freeze(arr))
        if self.lam.size != self.mu.size:
            raise ValueError("lam and mu must have equal length")

    @property
    def k(self) -> int:
        return self.lam.size

    @property
    def l(self) -> int:
        return self.gamma.size

    def vector(self) -> np.ndarray:
        """Stacked coordinates in row order (lam_1..k, mu_1..k, gamma_1..l)."""
        return np.concatenate([self.lam, self.mu, self.gamma])


def build_seed(s: Spectrum) -> np.ndarray:
    """The block-diagonal seed matrix realizing the spectrum exactly."""
    return assemble(
        Pattern(n=s.n, k=s.k),
        ParameterPoint(
            x=np.array([a for a, _ in s.pairs]),
            y=np.array([b for _, b in s.pairs]),
            z=np.array(s.reals),
            u=np.zeros(0),
            omega=np.zeros(0),
        ),
    )


def disc_radius(s: Spectrum) -> DiscSystem:
    """Disc system with radius eps = min(gap/3, mu_min/2).

    ``gap`` is the minimum pairwise distance among all 2k+l spectrum
    points; dividing by 3 leaves a guard band between discs.  The mu_min/2
    term keeps non-real discs clear of the real axis (dropped when k = 0).
    For a single-point spectrum the radius defaults to (1 + |value|)/3.
    """
    points = s.values()
    if s.n == 1:
        eps = (1.0 + abs(points[0])) / 3.0
    else:
        gap = min(
            abs(points[i] - points[j])
            for i in range(len(points))
            for j in range(i + 1, len(points))
        )
        if gap == 0.0:
            raise DegenerateSpectrum("spectrum points coincide")
        eps = gap / 3.0
        if s.k > 0:
            eps = min(eps, min(mu for _, mu in s.pairs) / 2.0)
    return DiscSystem(
        radius=eps,
        plus_centers=tuple(complex(a, b) for a, b in s.pairs),
        real_centers=s.reals,
    )


def assemble(p: Pattern, theta: ParameterPoint) -> np.ndarray:
    """Materialize the matrix family at a parameter point.

    Every position not named by the pattern is exactly zero; slot entries
    are written verbatim from u and omega.
    """
    if (
        theta.x.size != p.k
        or theta.y.size != p.k
        or theta.z.size != p.l
        or theta.u.size != p.m
        or theta.omega.size != p.m
    ):
        raise DimensionMismatch(
            f"parameter sizes (k={theta.x.size},{theta.y.size}, l={theta.z.size}, "
            f"m={theta.u.size},{theta.omega.size}) do not match pattern "
            f"(k={p.k}, l={p.l}, m={p.m})"
        )
    mtx = np.zeros((p.n, p.n))
    for j in range(p.k):
        a = 2 * j
        mtx[a, a] = theta.x[j]
        mtx[a + 1, a + 1] = theta.x[j]
        mtx[a, a + 1] = theta.y[j]
        mtx[a + 1, a] = -theta.y[j]
    for j in range(p.l):
        d = 2 * p.k + j
        mtx[d, d] = theta.z[j]
    for r, (i, j) in enumerate(p.slots):
        mtx[i - 1, j - 1] = theta.u[r]
        if p.bidirected[r]:
            mtx[j - 1, i - 1] = theta.omega[r]
    return mtx


def label_eigenvalues(eigs, d: DiscSystem) -> LabeledValue:
    """Assign each eigenvalue to its disc and read off the coordinates.

    Assignment is by nearest center, then validated: every disc must hold
    exactly one eigenvalue, an eigenvalue assigned to a real interval must
    be exactly real, and every eigenvalue must lie strictly inside its
    disc.  Any violation means the matrix has left the neighborhood where
    the labeling is meaningful and raises DiscViolation.
    """
    ev = np.atleast_1d(np.asarray(eigs, dtype=complex))
    if ev.size != d.n:
        raise ValueError(f"expected {d.n} eigenvalues, got {ev.size}")
    centers = d.all_centers()
    buckets: list[list[complex]] = [[] for _ in centers]
    for e in ev:
        dist = np.abs(centers - e)
        idx = int(np.argmin(dist))
        if dist[idx] >= d.radius:
            raise DiscViolation(
                f"eigenvalue {e} lies in no disc (nearest center {centers[idx]}, "
                f"distance {dist[idx]:.6g}, radius {d.radius:.6g})"
            )
        if np.count_nonzero(dist == dist[idx]) > 1:
            raise DiscViolation(f"eigenvalue {e} is equidistant from two discs")
        if idx >= 2 * d.k and e.imag != 0.0:
            raise DiscViolation(
                f"non-real eigenvalue {e} near real target {centers[idx].real}"
            )
        buckets[idx].append(complex(e))
    for idx, bucket in enumerate(buckets):
        if len(bucket) != 1:
            raise DiscViolation(
                f"disc at {centers[idx]} holds {len(bucket)} eigenvalues, expected 1"
            )
    plus = [buckets[j][0] for j in range(d.k)]
    if any(e.imag <= 0.0 for e in plus):
        raise DiscViolation("plus-disc eigenvalue has nonpositive imaginary part")
    return LabeledValue(
        lam=np.array([e.real for e in plus]),
        mu=np.array([e.imag for e in plus]),
        gamma=np.array([buckets[2 * d.k + j][0].real for j in range(d.l)]),
    )


def spectrum_mismatch(eigs, s: Spectrum) -> float:
    """Greedy nearest-neighbor multiset distance between eigenvalues and targets.

    For each target point the nearest unused computed eigenvalue is
    consumed; the result is the largest distance over all assignments.
    """
    ev = list(np.atleast_1d(np.asarray(eigs, dtype=complex)))
    targets = s.values()
    if len(ev) != len(targets):
        raise ValueError(f"expected {len(targets)} eigenvalues, got {len(ev)}")
    worst = 0.0
    for t in targets:
        dist = [abs(e - t) for e in ev]
        idx = int(np.argmin(dist))
        worst = max(worst, dist[idx])
        ev.pop(idx)
    return worst


# ---------------------------------------------------------------------------
# File formats


def parse_spectrum(text: str) -> Spectrum:
    """Parse the spectrum document: {"pairs": [[lam, mu], ...], "reals": [...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadFormat(f"spectrum document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise BadFormat("spectrum document must be a JSON object")
    unknown = set(doc) - {"pairs", "reals"}
    if unknown:
        raise BadFormat(f"unknown spectrum keys: {sorted(unknown)}")
    pairs = doc.get("pairs", [])
    reals = doc.get("reals", [])
    if not isinstance(pairs, list) or not isinstance(reals, list):
        raise BadFormat("'pairs' and 'reals' must be arrays")
    out_pairs = []
    for item in pairs:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)
        ):
            raise BadFormat(f"each pair must be [lam, mu], got {item!r}")
        out_pairs.append((float(item[0]), float(item[1])))
    for item in reals:
        if not isinstance(item, (int, float)) or isinstance(item, bool):
            raise BadFormat(f"each real must be a number, got {item!r}")
    try:
        return Spectrum(pairs=tuple(out_pairs), reals=tuple(float(g) for g in reals))
    except ValueError as exc:
        raise BadFormat(str(exc)) from exc


def format_spectrum(s: Spectrum) -> str:
    """Inverse of :func:`parse_spectrum`; floats round-trip exactly."""
    doc = {"pairs": [[a, b] for a, b in s.pairs], "reals": list(s.reals)}
    return json.dumps(doc, indent=2) + "\n"


def parse_matrix_csv(text: str) -> np.ndarray:
    """Parse a comma-separated matrix, one row per line."""
    rows = []
    for no, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        try:
            rows.append([float(tok) for tok in ln.split(",")])
        except ValueError as exc:
            raise BadFormat(f"line {no}: not a numeric row") from exc
    if not rows:
        raise BadFormat("empty matrix document")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise BadFormat("rows have inconsistent lengths")
    a = np.array(rows, dtype=float)
    if not np.all(np.isfinite(a)):
        raise BadFormat("matrix entries must be finite")
    return a


def format_matrix_csv(m: np.ndarray) -> str:
    """17-significant-digit CSV; write-then-read reproduces entries bit-exactly."""
    a = np.asarray(m, dtype=float)
    return "\n".join(",".join(f"{v:.17g}" for v in row) for row in a) + "\n"


def format_matrix_market(m: np.ndarray) -> str:
    """Coordinate-format export of the nonzero entries, for sparse viewing."""
    a = np.asarray(m, dtype=float)
    rows, cols = a.shape
    entries = [
        f"{i + 1} {j + 1} {a[i, j]:.17g}"
        for i in range(rows)
        for j in range(cols)
        if a[i, j] != 0.0
    ]
    head = ["%%MatrixMarket matrix coordinate real general", f"{rows} {cols} {len(entries)}"]
    return "\n".join(head + entries) + "\n"
