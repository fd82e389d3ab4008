"""Curvature of class-diagonal left-invariant metrics from structure constants.

A left-invariant metric that assigns one constant to each generator class is
represented in the frame by the diagonal g_aa = x_class(a) * w_a, where the
per-generator weights w_a fix the normalization of the class constants:

    w_a = 4 * G_aa                    (all classes except the balance class)
    w_balance = 2 * (p*q*n)^2         (the unnormalized trace-balance generator)

The overall factor is calibrated once so that x = (1, ..., 1) is the
bi-invariant metric with Einstein constant n/8; the balance-class factor puts
x_4 in the gauge used by the closed-form solution families.  With frame
brackets [e_a, e_b] = f^c_ab e_c and constant g, the Koszul formula gives
constant connection coefficients

    Gamma^c_ab = (F_abc - F_bca + F_cab) / (2 g_cc),   F_abc = f^c_ab g_cc,

and the curvature operator R(e_a, e_b) e_c = (grad_a grad_b - grad_b grad_a
- grad_[a,b]) e_c yields the frame Riemann tensor.  Everything here is a pure
function of (f, g); results are deterministic and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liealg import StructureConstants

DEFAULT_EINSTEIN_TOL = 1e-8

_BIINVARIANT_WEIGHT = 4.0  # fixes lambda = n/8 at x = (1,...,1)


def frame_weights(sc: StructureConstants) -> np.ndarray:
    """Per-generator metric weights w_a (frame metric is g_aa = x_class * w_a)."""
    w = _BIINVARIANT_WEIGHT * np.diag(sc.gram).copy()
    if sc.scheme == 2:
        mask = sc.class_of == 3
        if np.any(mask):
            p, q, n = sc.p, sc.q, sc.n
            w[mask] = 2.0 * float(p * q * n) ** 2
    return w


@dataclass(frozen=True)
class MetricSpec:
    """A class-diagonal metric: positive constant x_c per generator class.

    ``g`` is the induced frame-diagonal metric, x_class(a) * w_a.
    """

    scheme: int
    n: int
    p: int | None
    x: tuple[float, ...]
    class_of: np.ndarray
    weights: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        self.class_of.flags.writeable = False
        self.weights.flags.writeable = False
        self.g.flags.writeable = False

    @classmethod
    def from_x(cls, sc: StructureConstants, x) -> "MetricSpec":
        x = tuple(float(v) for v in x)
        if len(x) != sc.num_classes:
            raise ValueError(f"expected {sc.num_classes} metric constants, got {len(x)}")
        if any(v <= 0 for v in x):
            raise ValueError(f"metric constants must be strictly positive, got {x}")
        w = frame_weights(sc)
        g = np.asarray(x)[sc.class_of] * w
        return cls(
            scheme=sc.scheme,
            n=sc.n,
            p=sc.p,
            x=x,
            class_of=sc.class_of.copy(),
            weights=w,
            g=g,
        )

    def scaled(self, c: float) -> "MetricSpec":
        """The uniformly rescaled metric c*g."""
        return MetricSpec(
            scheme=self.scheme,
            n=self.n,
            p=self.p,
            x=tuple(c * v for v in self.x),
            class_of=self.class_of.copy(),
            weights=self.weights.copy(),
            g=c * self.g,
        )


def levi_civita(sc: StructureConstants, metric: MetricSpec) -> np.ndarray:
    """Connection coefficients Gamma[c, a, b] of the Levi-Civita connection.

    Satisfies 2 g(grad_a e_b, e_c) = g([a,b],c) - g([b,c],a) + g([c,a],b),
    hence metric compatibility and Gamma^c_ab - Gamma^c_ba = f^c_ab.
    """
    g = metric.g
    F = np.einsum("cab,c->abc", sc.f, g)  # F[a,b,c] = f^c_ab g_cc
    F_bca = np.einsum("bca->abc", F)
    F_cab = np.einsum("cab->abc", F)
    gamma = (F - F_bca + F_cab) / (2.0 * g[None, None, :])
    return np.ascontiguousarray(np.einsum("abc->cab", gamma))


def riemann(gamma: np.ndarray, sc: StructureConstants) -> np.ndarray:
    """Frame Riemann tensor Riem[d, c, a, b], i.e. R(e_a, e_b) e_c = Riem[d,c,a,b] e_d."""
    t1 = np.einsum("dae,ebc->dcab", gamma, gamma, optimize=True)
    t2 = np.einsum("dcab->dcba", t1)
    t3 = np.einsum("eab,dec->dcab", sc.f, gamma, optimize=True)
    return t1 - t2 - t3


def ricci(riem: np.ndarray) -> np.ndarray:
    """Ricci matrix by contracting the first and third slots of Riem[d, c, a, b]."""
    return np.einsum("acab->cb", riem)


def ricci_fast(gamma: np.ndarray, sc: StructureConstants) -> np.ndarray:
    """Ricci directly from the connection, without materializing Riemann.

    Same contraction as ricci(riemann(...)); O(d^3) memory instead of O(d^4).
    """
    v = np.einsum("aae->e", gamma)
    t1 = np.einsum("e,ebc->cb", v, gamma)
    t2 = np.einsum("abe,eac->cb", gamma, gamma, optimize=True)
    t3 = np.einsum("eab,aec->cb", sc.f, gamma, optimize=True)
    return t1 - t2 - t3


def lower_riemann(riem: np.ndarray, metric: MetricSpec) -> np.ndarray:
    """Fully lowered tensor L[d, c, a, b] = g_dd Riem[d, c, a, b]."""
    return riem * metric.g[:, None, None, None]


def riem_norm_sq(riem: np.ndarray, metric: MetricSpec) -> float:
    """|Riem|^2: all four indices of the lowered tensor raised with g^-1."""
    g = metric.g
    low = lower_riemann(riem, metric)
    up = low / g[:, None, None, None] / g[None, :, None, None]
    up /= g[None, None, :, None] * g[None, None, None, :]
    return float(np.sum(low * up))


def scalar_curvature(ric: np.ndarray, metric: MetricSpec) -> float:
    """Scalar curvature, the g-trace of the Ricci matrix."""
    return float(np.sum(np.diag(ric) / metric.g))


@dataclass(frozen=True)
class CurvatureBundle:
    """All curvature data of one metric."""

    gamma: np.ndarray
    riem: np.ndarray | None
    ric: np.ndarray
    scalar: float
    riem_norm_sq: float | None
    lambda_best: float
    residual: float


def curvature_bundle(sc: StructureConstants, metric: MetricSpec,
                     with_riemann: bool = True) -> CurvatureBundle:
    """Compute connection, curvature tensors and the Einstein fit for a metric.

    With ``with_riemann=False`` only the Ricci-level quantities are computed
    (enough for Einstein residuals), which is much lighter for large n.
    """
    gamma = levi_civita(sc, metric)
    if with_riemann:
        riem = riemann(gamma, sc)
        ric = ricci(riem)
        rnorm = riem_norm_sq(riem, metric)
    else:
        riem = None
        ric = ricci_fast(gamma, sc)
        rnorm = None
    lam = float(np.mean(np.diag(ric) / metric.g))
    res = float(np.abs(ric - lam * np.diag(metric.g)).max())
    return CurvatureBundle(
        gamma=gamma,
        riem=riem,
        ric=ric,
        scalar=scalar_curvature(ric, metric),
        riem_norm_sq=rnorm,
        lambda_best=lam,
        residual=res,
    )


def einstein_residual(metric: MetricSpec, sc: StructureConstants) -> tuple[float, float]:
    """(residual, lambda_best) for the Einstein condition Ric = lambda g.

    lambda_best is the g-trace mean of Ricci; the residual is the max-norm of
    Ric - lambda_best * g in the frame.  Zero residual iff the metric is
    Einstein.
    """
    bundle = curvature_bundle(sc, metric, with_riemann=False)
    return bundle.residual, bundle.lambda_best


def invariant_I1(metric: MetricSpec, sc: StructureConstants,
                 tol: float = DEFAULT_EINSTEIN_TOL) -> float:
    """The dimensionless invariant |Riem|^2 / lambda^2 of an Einstein metric.

    Invariant under uniform rescaling of the metric.  Raises ValueError when
    the metric is not Einstein within ``tol`` or when lambda vanishes.
    """
    bundle = curvature_bundle(sc, metric, with_riemann=True)
    if bundle.residual > tol:
        raise ValueError(
            f"I1 undefined: metric is not Einstein (residual {bundle.residual:.3e} > {tol:.1e})"
        )
    if bundle.lambda_best == 0.0:
        raise ValueError("I1 undefined: lambda is zero")
    return bundle.riem_norm_sq / bundle.lambda_best**2


def class_ricci_eigenvalues(sc: StructureConstants, metric: MetricSpec,
                            check_tol: float = 1e-9) -> np.ndarray:
    """Per-class Ricci eigenvalues R_aa / w_a (one value per generator class).

    For a class-diagonal metric the Ricci matrix is block-scalar, so R_aa/w_a
    is constant on each class; that constant equals lambda * x_c exactly when
    the metric is Einstein.  Raises if the block-scalar structure is violated
    beyond ``check_tol`` (which would mean the ansatz is inconsistent).
    """
    bundle = curvature_bundle(sc, metric, with_riemann=False)
    sigma = np.diag(bundle.ric) / metric.weights
    offdiag = float(np.abs(bundle.ric - np.diag(np.diag(bundle.ric))).max())
    if offdiag > check_tol:
        raise ValueError(f"Ricci is not frame-diagonal (offdiag {offdiag:.3e})")
    out = np.empty(sc.num_classes)
    for c in range(sc.num_classes):
        vals = sigma[sc.class_of == c]
        if vals.size == 0:
            out[c] = np.nan
            continue
        if np.ptp(vals) > check_tol:
            raise ValueError(
                f"Ricci not scalar on class {c} (spread {np.ptp(vals):.3e})"
            )
        out[c] = vals.mean()
    return out
