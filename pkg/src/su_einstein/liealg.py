"""Generator bases for su(n) and their structure constants.

Two families of traceless Hermitian generator bases are built from the
elementary matrix units E_AB:

Scheme 1 splits su(n) into three classes: the m = n(n-1)/2 symmetric
off-diagonal combinations E_AB + E_BA, the m antisymmetric combinations
i(E_AB - E_BA), and n-1 diagonal generators obtained by applying the
product P*Q to the diagonal units E_AA, where Q is the usual orthonormal
"cascading" diagonal mix and P is a reflection that puts the diagonal
generators on a symmetric footing.  The last row of P*Q spans the u(1)
direction (a multiple of the identity) and is dropped.

Scheme 2 is adapted to the block decomposition SU(p) x SU(q) inside
SU(p+q): class 1 is a Scheme-1 basis of the upper su(p) block, class 2
the same for the lower su(q) block, class 3 holds the 2pq off-block
combinations, and class 4 is the single trace-balance generator
q*sum(E_aa, a<=p) - p*sum(E_bb, b>p), kept unnormalized.

Generators T_a are Hermitian, so the real structure constants are defined
through [T_a, T_b] = i f^c_ab T_c and recovered from matrix commutators by
projecting with the Gram matrix G_ab = Re tr(T_a T_b).  The dual frame
then obeys d sigma^c = -1/2 f^c_ab sigma^a ^ sigma^b.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SCHEME1_CLASSES = ("offdiag_sym", "offdiag_anti", "diag")
SCHEME2_CLASSES = ("su_p", "su_q", "cross", "balance")


@dataclass(frozen=True)
class GeneratorBasis:
    """An ordered basis of traceless Hermitian n x n matrices with class labels.

    ``class_of[a]`` is the class index of generator ``a`` (0..2 for scheme 1,
    0..3 for scheme 2).  The arrays are read-only; instances are safe to share.
    """

    n: int
    scheme: int
    p: int | None
    generators: np.ndarray  # (d, n, n) complex
    class_of: np.ndarray    # (d,) int

    def __post_init__(self):
        self.generators.flags.writeable = False
        self.class_of.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.generators.shape[0]

    @property
    def q(self) -> int | None:
        return None if self.p is None else self.n - self.p

    @property
    def class_labels(self) -> tuple[str, ...]:
        return SCHEME1_CLASSES if self.scheme == 1 else SCHEME2_CLASSES

    @property
    def num_classes(self) -> int:
        return len(self.class_labels)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(int(np.sum(self.class_of == c)) for c in range(self.num_classes))

    def gram_diagonal(self) -> np.ndarray:
        """Diagonal of G_ab = Re tr(T_a T_b) (the basis is trace-orthogonal)."""
        T = self.generators
        return np.real(np.einsum("aij,aji->a", T, T))


@dataclass(frozen=True)
class StructureConstants:
    """Real structure constants f^c_ab and Gram data of a generator basis.

    ``f[c, a, b]`` is the coefficient of T_c in -i [T_a, T_b].  The context
    fields (scheme, n, p, class_of) are carried along so curvature code can
    be driven from this object alone.
    """

    d: int
    f: np.ndarray      # (d, d, d)
    gram: np.ndarray   # (d, d)
    scheme: int
    n: int
    p: int | None
    class_of: np.ndarray

    def __post_init__(self):
        self.f.flags.writeable = False
        self.gram.flags.writeable = False
        self.class_of.flags.writeable = False

    @property
    def q(self) -> int | None:
        return None if self.p is None else self.n - self.p

    @property
    def num_classes(self) -> int:
        return 3 if self.scheme == 1 else 4

    def lowered(self) -> np.ndarray:
        """Fully lowered tensor f_abc = f^e_ab G_ec (totally antisymmetric)."""
        return np.einsum("eab,ec->abc", self.f, self.gram)


def _diag_mix_rows(k: int) -> np.ndarray:
    """Rows 1..k-1 of the product P*Q used to mix the k diagonal units.

    Q rows j < k are (1,...,1,-j,0,...,0)/sqrt(j(j+1)); row k is the u(1)
    direction (1,...,1)/sqrt(k).  P acts as (2/(k-1))*J - I on the first
    k-1 rows and as the identity on the last.  Only the first k-1 rows of
    P*Q are returned; the u(1) row is not an su(k) generator.
    """
    Q = np.zeros((k, k))
    for j in range(1, k):
        Q[j - 1, :j] = 1.0 / np.sqrt(j * (j + 1))
        Q[j - 1, j] = -j / np.sqrt(j * (j + 1))
    Q[k - 1, :] = 1.0 / np.sqrt(k)
    P = np.zeros((k, k))
    P[: k - 1, : k - 1] = (2.0 / (k - 1)) * np.ones((k - 1, k - 1)) - np.eye(k - 1)
    P[k - 1, k - 1] = 1.0
    return (P @ Q)[: k - 1]


def _block_generators(n: int, idxs: list[int]) -> tuple[list[np.ndarray], list[int]]:
    """Scheme-1-style generators supported on the given index set.

    Returns the matrices (embedded in n x n) and their local class ids
    (0 = symmetric off-diagonal, 1 = antisymmetric, 2 = diagonal mix).
    """
    k = len(idxs)
    mats: list[np.ndarray] = []
    cls: list[int] = []
    for i in range(k):
        for j in range(i + 1, k):
            M = np.zeros((n, n), dtype=complex)
            M[idxs[i], idxs[j]] = 1.0
            M[idxs[j], idxs[i]] = 1.0
            mats.append(M)
            cls.append(0)
    for i in range(k):
        for j in range(i + 1, k):
            M = np.zeros((n, n), dtype=complex)
            M[idxs[i], idxs[j]] = 1.0j
            M[idxs[j], idxs[i]] = -1.0j
            mats.append(M)
            cls.append(1)
    if k >= 2:
        for row in _diag_mix_rows(k):
            M = np.zeros((n, n), dtype=complex)
            for t, idx in enumerate(idxs):
                M[idx, idx] = row[t]
            mats.append(M)
            cls.append(2)
    return mats, cls


def build_scheme1_basis(n: int) -> GeneratorBasis:
    """Build the three-class su(n) basis: sym/antisym pairs, then diagonal mixes.

    Off-diagonal generators are ordered lexicographically in (A, B), A < B.
    Requires n >= 2.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    mats, cls = _block_generators(n, list(range(n)))
    return GeneratorBasis(
        n=n,
        scheme=1,
        p=None,
        generators=np.array(mats),
        class_of=np.array(cls, dtype=int),
    )


def build_scheme2_basis(n: int, p: int) -> GeneratorBasis:
    """Build the four-class basis adapted to SU(p) x SU(q) in SU(n), q = n - p.

    Degenerate splits are allowed: p or q in {0, 1} simply leaves class 1
    or 2 empty (su(1) has no generators), and the trace-balance class is
    present only when both blocks are nonempty.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    if p < 0 or p > n:
        raise ValueError(f"need 0 <= p <= n, got p={p}, n={n}")
    q = n - p
    mats: list[np.ndarray] = []
    cls: list[int] = []

    block1, _ = _block_generators(n, list(range(p)))
    mats += block1
    cls += [0] * len(block1)
    block2, _ = _block_generators(n, list(range(p, n)))
    mats += block2
    cls += [1] * len(block2)

    for a in range(p):
        for b in range(p, n):
            M = np.zeros((n, n), dtype=complex)
            M[a, b] = 1.0
            M[b, a] = 1.0
            mats.append(M)
            cls.append(2)
    for a in range(p):
        for b in range(p, n):
            M = np.zeros((n, n), dtype=complex)
            M[a, b] = 1.0j
            M[b, a] = -1.0j
            mats.append(M)
            cls.append(2)

    if p >= 1 and q >= 1:
        M = np.zeros((n, n), dtype=complex)
        for a in range(p):
            M[a, a] = q
        for b in range(p, n):
            M[b, b] = -p
        mats.append(M)
        cls.append(3)

    return GeneratorBasis(
        n=n,
        scheme=2,
        p=p,
        generators=np.array(mats),
        class_of=np.array(cls, dtype=int),
    )


def structure_constants(basis: GeneratorBasis) -> StructureConstants:
    """Extract real f^c_ab from matrix commutators via Gram projection.

    Solves [T_a, T_b] = i f^c_ab T_c by f^c_ab = (G^-1)_cd Re tr(-i [T_a,T_b] T_d).
    A singular Gram matrix signals a linearly dependent basis.
    """
    T = basis.generators
    d = basis.dim
    gram = np.real(np.einsum("aij,bji->ab", T, T))
    try:
        gram_inv = np.linalg.inv(gram)
    except np.linalg.LinAlgError as exc:
        raise ValueError("Gram matrix is singular: generators are linearly dependent") from exc
    comm = np.einsum("aij,bjk->abik", T, T) - np.einsum("bij,ajk->abik", T, T)
    proj = np.real(np.einsum("abij,dji->abd", -1.0j * comm, T))
    f = np.einsum("cd,abd->cab", gram_inv, proj)
    return StructureConstants(
        d=d,
        f=f,
        gram=gram,
        scheme=basis.scheme,
        n=basis.n,
        p=basis.p,
        class_of=basis.class_of.copy(),
    )


@dataclass
class BasisReport:
    """Diagnostic report produced by validate_basis."""

    n: int
    scheme: int
    p: int | None
    dim: int
    class_sizes: tuple[int, ...]
    hermiticity_dev: float
    trace_dev: float
    gram_diagonal: np.ndarray
    gram_offdiag_dev: float
    gram_min_eig: float
    f_antisymmetry_dev: float
    jacobi_dev: float
    lowered_antisymmetry_dev: float
    problems: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems

    def summary_lines(self) -> list[str]:
        lines = [
            f"generators: {self.dim} (n={self.n}, scheme {self.scheme}"
            + (f", p={self.p}" if self.p is not None else "")
            + ")",
            f"class sizes: {'/'.join(str(s) for s in self.class_sizes)}",
            f"hermiticity dev: {self.hermiticity_dev:.2e}",
            f"tracelessness dev: {self.trace_dev:.2e}",
            f"gram offdiag dev: {self.gram_offdiag_dev:.2e}  min eig: {self.gram_min_eig:.6g}",
            f"f antisymmetry dev: {self.f_antisymmetry_dev:.2e}",
            f"jacobi dev: {self.jacobi_dev:.2e}",
            f"lowered antisymmetry dev: {self.lowered_antisymmetry_dev:.2e}",
        ]
        for prob in self.problems:
            lines.append(f"FAIL: {prob}")
        lines.append("status: " + ("PASS" if self.passed else "FAIL"))
        return lines


def validate_basis(basis: GeneratorBasis, tol: float = 1e-12) -> BasisReport:
    """Check Hermiticity, tracelessness, Gram structure and the f identities.

    Report only; never raises.  Used by the CLI and the test harness.
    """
    T = basis.generators
    problems: list[str] = []

    herm = float(np.abs(T - np.conj(np.transpose(T, (0, 2, 1)))).max())
    if herm > tol:
        problems.append(f"non-Hermitian generator (dev {herm:.2e})")
    trc = float(np.abs(np.einsum("aii->a", T)).max())
    if trc > tol:
        problems.append(f"generator with nonzero trace (dev {trc:.2e})")

    expected = _expected_class_sizes(basis)
    sizes = basis.class_sizes()
    if expected is not None and sizes != expected:
        problems.append(f"class sizes {sizes} != expected {expected}")

    gram = np.real(np.einsum("aij,bji->ab", T, T))
    offdiag = float(np.abs(gram - np.diag(np.diag(gram))).max())
    if offdiag > tol:
        problems.append(f"Gram matrix not diagonal (dev {offdiag:.2e})")
    eigs = np.linalg.eigvalsh(gram)
    min_eig = float(eigs.min())
    if min_eig <= tol:
        problems.append(f"Gram matrix near-singular (min eig {min_eig:.2e})")

    f_anti = jacobi = low_anti = 0.0
    if min_eig > tol:
        sc = structure_constants(basis)
        f = sc.f
        f_anti = float(np.abs(f + np.transpose(f, (0, 2, 1))).max())
        jac = np.einsum("eab,dec->abcd", f, f, optimize=True)
        jac += np.einsum("ebc,dea->abcd", f, f, optimize=True)
        jac += np.einsum("eca,deb->abcd", f, f, optimize=True)
        jacobi = float(np.abs(jac).max())
        low = sc.lowered()
        low_anti = max(
            float(np.abs(low + np.einsum("bac->abc", low)).max()),
            float(np.abs(low + np.einsum("acb->abc", low)).max()),
        )
        if f_anti > tol:
            problems.append(f"f not antisymmetric (dev {f_anti:.2e})")
        if jacobi > tol:
            problems.append(f"Jacobi identity violated (dev {jacobi:.2e})")
        if low_anti > tol:
            problems.append(f"lowered f not totally antisymmetric (dev {low_anti:.2e})")

    return BasisReport(
        n=basis.n,
        scheme=basis.scheme,
        p=basis.p,
        dim=basis.dim,
        class_sizes=sizes,
        hermiticity_dev=herm,
        trace_dev=trc,
        gram_diagonal=np.diag(gram),
        gram_offdiag_dev=offdiag,
        gram_min_eig=min_eig,
        f_antisymmetry_dev=f_anti,
        jacobi_dev=jacobi,
        lowered_antisymmetry_dev=low_anti,
        problems=problems,
    )


def _expected_class_sizes(basis: GeneratorBasis) -> tuple[int, ...] | None:
    n = basis.n
    if basis.scheme == 1:
        m = n * (n - 1) // 2
        return (m, m, n - 1)
    if basis.p is None:
        return None
    p, q = basis.p, basis.n - basis.p
    return (max(p * p - 1, 0), max(q * q - 1, 0), 2 * p * q, 1 if p >= 1 and q >= 1 else 0)


# -- exact (symbolic) validation -------------------------------------------
#
# The diagonal-mix rows carry square roots, so "exact" arithmetic here means
# sympy's algebraic numbers rather than plain rationals.  Intended for small
# n (the symbolic commutator projections grow quickly).


def _sympy_basis(basis: GeneratorBasis):
    import sympy as sp

    n, scheme, p = basis.n, basis.scheme, basis.p

    def diag_rows(k):
        Q = sp.zeros(k, k)
        for j in range(1, k):
            for t in range(j):
                Q[j - 1, t] = 1 / sp.sqrt(j * (j + 1))
            Q[j - 1, j] = -j / sp.sqrt(j * (j + 1))
        for t in range(k):
            Q[k - 1, t] = 1 / sp.sqrt(k)
        P = sp.zeros(k, k)
        for i in range(k - 1):
            for j in range(k - 1):
                P[i, j] = sp.Rational(2, k - 1) - (1 if i == j else 0)
        P[k - 1, k - 1] = 1
        return (P * Q)[: k - 1, :]

    def block(idxs):
        k = len(idxs)
        out = []
        for i in range(k):
            for j in range(i + 1, k):
                M = sp.zeros(n, n)
                M[idxs[i], idxs[j]] = 1
                M[idxs[j], idxs[i]] = 1
                out.append(M)
        for i in range(k):
            for j in range(i + 1, k):
                M = sp.zeros(n, n)
                M[idxs[i], idxs[j]] = sp.I
                M[idxs[j], idxs[i]] = -sp.I
                out.append(M)
        if k >= 2:
            rows = diag_rows(k)
            for r in range(k - 1):
                M = sp.zeros(n, n)
                for t, idx in enumerate(idxs):
                    M[idx, idx] = rows[r, t]
                out.append(M)
        return out

    if scheme == 1:
        return block(list(range(n)))
    q = n - p
    mats = block(list(range(p))) + block(list(range(p, n)))
    for a in range(p):
        for b in range(p, n):
            M = sp.zeros(n, n)
            M[a, b] = 1
            M[b, a] = 1
            mats.append(M)
    for a in range(p):
        for b in range(p, n):
            M = sp.zeros(n, n)
            M[a, b] = sp.I
            M[b, a] = -sp.I
            mats.append(M)
    if p >= 1 and q >= 1:
        M = sp.zeros(n, n)
        for a in range(p):
            M[a, a] = q
        for b in range(p, n):
            M[b, b] = -p
        mats.append(M)
    return mats


def exact_validate(basis: GeneratorBasis) -> dict:
    """Symbolically exact check of the basis and f identities (small n only).

    Rebuilds the generators with sympy (the diagonal mixes carry square
    roots, so exact means algebraic numbers, not plain rationals) and
    verifies: Hermiticity, zero trace, diagonality of the Gram matrix, that
    the projected f reproduce every commutator exactly, and total
    antisymmetry of the lowered tensor.  Exact commutator reproduction plus
    a nonsingular Gram implies the Jacobi identity for f (matrix brackets
    satisfy it identically), which is how the ``jacobi`` flag is derived;
    for d <= 8 the identity is additionally expanded term by term.
    Cost grows steeply with d; meant for n <= 4.
    """
    import sympy as sp

    def is_zero(expr) -> bool:
        e = sp.expand(expr)
        return e == 0 or sp.simplify(e) == 0

    mats = _sympy_basis(basis)
    d = len(mats)
    ok_herm = all(M == M.conjugate().T for M in mats)
    ok_trace = all(is_zero(sp.trace(M)) for M in mats)

    gram = sp.zeros(d, d)
    for a in range(d):
        for b in range(a, d):
            gram[a, b] = gram[b, a] = sp.simplify(sp.expand(sp.trace(mats[a] * mats[b])))
    ok_gram_diag = all(gram[a, b] == 0 for a in range(d) for b in range(a + 1, d))
    gram_diag = [gram[a, a] for a in range(d)]

    f: dict[tuple[int, int, int], object] = {}
    ok_commutators = True
    for a in range(d):
        for b in range(a + 1, d):
            comm = sp.expand(mats[a] * mats[b] - mats[b] * mats[a])
            coeffs = []
            for c in range(d):
                v = sp.simplify(sp.expand(sp.trace(-sp.I * comm * mats[c])) / gram[c, c])
                coeffs.append(v)
                if v != 0:
                    f[(c, a, b)] = v
            rebuilt = sp.expand(sp.I * sum((v * M for v, M in zip(coeffs, mats)), sp.zeros(basis.n, basis.n)))
            if not all(is_zero(comm[i, j] - rebuilt[i, j]) for i in range(basis.n) for j in range(basis.n)):
                ok_commutators = False

    def f_at(c, a, b):
        if a == b:
            return sp.Integer(0)
        if a < b:
            return f.get((c, a, b), sp.Integer(0))
        return -f.get((c, b, a), sp.Integer(0))

    def lowered(a, b, c):
        return f_at(c, a, b) * gram[c, c]

    ok_lowered = True
    for (c, a, b) in list(f):
        base = lowered(a, b, c)
        for (i, j, k), sign in (((b, c, a), 1), ((c, a, b), 1),
                                ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1)):
            if not is_zero(lowered(i, j, k) - sign * base):
                ok_lowered = False

    ok_jacobi = ok_commutators and ok_gram_diag
    if d <= 8:
        for a in range(d):
            for b in range(a + 1, d):
                for c in range(b + 1, d):
                    for dd in range(d):
                        s = sum(
                            f_at(e, a, b) * f_at(dd, e, c)
                            + f_at(e, b, c) * f_at(dd, e, a)
                            + f_at(e, c, a) * f_at(dd, e, b)
                            for e in range(d)
                        )
                        if not is_zero(s):
                            ok_jacobi = False

    return {
        "hermitian": ok_herm,
        "traceless": ok_trace,
        "gram_diagonal_exact": ok_gram_diag,
        "gram_diagonal": gram_diag,
        "commutators_reproduced": ok_commutators,
        "lowered_antisymmetric": ok_lowered,
        "jacobi": ok_jacobi,
        "all_passed": (ok_herm and ok_trace and ok_gram_diag
                       and ok_commutators and ok_lowered and ok_jacobi),
    }
