"""Coherent and bi-coherent states, displacement operators, and the
exponential translation operators built from a pseudo-bosonic pair.

The bi-coherent pair attached to a label z is

    phi(z) = exp(-|z|^2/2) sum_k z^k/sqrt(k!) phi_k,
    psi(z) = exp(-|z|^2/2) sum_k z^k/sqrt(k!) psi_k,

eigenvectors of a and b^dag with eigenvalue z.  For regular systems the
same vectors arise as S Phi(z) and S^{-1} Phi(z) with Phi(z) the
standard coherent state; both construction routes are kept and cross
checked.

The translation operators T1(alpha) = exp(i alpha x) and
T2(beta) = exp(-i beta p), with x = (a+b)/sqrt(2), p = (a-b)/(i sqrt 2),
are built in their ordered factorized form

    T1 = e^{-alpha^2/4} e^{i alpha b/sqrt 2} e^{i alpha a/sqrt 2},
    T2 = e^{-beta^2/4}  e^{beta b/sqrt 2}  e^{-beta a/sqrt 2},

which is the form the lattice factorization argument uses; the direct
matrix exponential is retained as a consistency check.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CoverageError, NumericInputError, UsageError
from .fock import ladder_matrices, matrix_exp
from .kernels import coherent_table, pairwise_sum, quad_node_products
from .reporting import DEFAULT_TOLERANCES, StructureReport

__all__ = [
    "standard_coherent",
    "coherent_tail_estimate",
    "BiCoherentPair",
    "bicoherent_pair",
    "displacement_matrix",
    "translation_operator",
    "eigen_residuals",
    "DiscQuadrature",
    "resolution_quadrature",
    "weyl_factorization_check",
    "position_momentum",
]

_TAIL_WARN = 1e-6


def coherent_tail_estimate(z, dim, max_terms=200):
    """Dropped-tail bound exp(-|z|^2/2) sum_{k>=dim} |z|^k/sqrt(k!).

    Ratio-test summation with a hard cap of ``max_terms`` extra terms.
    """
    r = abs(z)
    if r == 0.0:
        return 0.0
    # log of the first dropped term, then accumulate the ratio series
    logt = -0.5 * r * r + dim * np.log(r) - 0.5 * sum(
        np.log(k) for k in range(1, dim + 1)
    )
    term = np.exp(logt)
    total = 0.0
    for k in range(dim, dim + max_terms):
        total += term
        ratio = r / np.sqrt(k + 1.0)
        term *= ratio
        if ratio < 1.0 and term < 1e-30:
            break
    return float(total)


def standard_coherent(z, dim):
    """Truncated standard coherent state Phi(z) in the number basis.

    Warns when |z|^2 > dim/4, the heuristic beyond which the dropped
    tail stops being negligible at this truncation.
    """
    z = complex(z)
    if abs(z) ** 2 > dim / 4.0:
        warnings.warn(
            f"|z|^2 = {abs(z)**2:.3g} exceeds dim/4 = {dim / 4:.3g}; "
            f"tail estimate {coherent_tail_estimate(z, dim):.3e}",
            stacklevel=2,
        )
    return coherent_table(z, dim)[0]


@dataclass
class BiCoherentPair:
    """A label z with its two state vectors and construction metadata."""

    z: complex
    phi_z: np.ndarray = field(repr=False)
    psi_z: np.ndarray = field(repr=False)
    truncation_error: float = 0.0
    route: str = "series"


def bicoherent_pair(system, z, route="series"):
    """Build (phi(z), psi(z)) for ``system`` by the chosen route.

    ``series`` sums the coefficient series over the stored families and
    works for every system; ``s_transform`` applies S resp. S^{-1} to
    the standard coherent state and requires a regular system.
    """
    z = complex(z)
    dim = system.dim
    if route == "series":
        coeff = coherent_table(z, dim)[0]
        phi_z = system.phi @ coeff
        psi_z = system.psi @ coeff
        scale = max(
            np.linalg.norm(system.phi[:, -1]), np.linalg.norm(system.psi[:, -1])
        )
        tail = coherent_tail_estimate(z, dim) * scale
    elif route == "s_transform":
        if not system.regular:
            raise UsageError("s_transform route requires a regular (Riesz) system")
        coeff = coherent_table(z, dim)[0]
        phi_z = system.S @ coeff
        psi_z = system.S_inv @ coeff
        tail = coherent_tail_estimate(z, dim) * float(
            np.linalg.norm(system.S, 2)
        )
    else:
        raise UsageError(f"unknown route {route!r}; expected 'series' or 's_transform'")
    if tail > _TAIL_WARN:
        warnings.warn(
            f"bi-coherent truncation estimate {tail:.3e} at z={z}; increase dim",
            stacklevel=2,
        )
    return BiCoherentPair(z=z, phi_z=phi_z, psi_z=psi_z, truncation_error=tail, route=route)


def displacement_matrix(system, z, which="W"):
    """Displacement operator W(z), U(z) or V(z) as a dense matrix.

    W(z) = exp(z c^dag - conj(z) c) needs only the truncation size, so
    ``system`` may be an integer dim in that case.  U(z) =
    exp(z b - conj(z) a) and V(z) = exp(z a^dag - conj(z) b^dag) need
    the system's deformed pair.
    """
    z = complex(z)
    if which == "W":
        dim = system if isinstance(system, (int, np.integer)) else system.dim
        c, cdag = ladder_matrices(dim)
        return matrix_exp(z * cdag - np.conj(z) * c)
    if isinstance(system, (int, np.integer)):
        raise UsageError(f"{which}(z) needs a system, not a bare dimension")
    if which == "U":
        return matrix_exp(z * system.b - np.conj(z) * system.a)
    if which == "V":
        return matrix_exp(z * system.a.conj().T - np.conj(z) * system.b.conj().T)
    raise UsageError(f"unknown displacement {which!r}; expected 'W', 'U' or 'V'")


def position_momentum(system):
    """Deformed quadratures x = (a+b)/sqrt2, p = (a-b)/(i sqrt2)."""
    x = (system.a + system.b) / np.sqrt(2.0)
    p = (system.a - system.b) / (1j * np.sqrt(2.0))
    return x, p


def translation_operator(system, alpha, which, factorized=True):
    """T1(alpha) = exp(i alpha x) or T2(alpha) = exp(-i alpha p).

    ``factorized=True`` (canonical) builds the ordered product form;
    ``factorized=False`` exponentiates the generator directly.
    """
    alpha = float(alpha)
    s = alpha / np.sqrt(2.0)
    if which == 1:
        if factorized:
            return (
                np.exp(-(alpha**2) / 4.0)
                * matrix_exp(1j * s * system.b)
                @ matrix_exp(1j * s * system.a)
            )
        x, _ = position_momentum(system)
        return matrix_exp(1j * alpha * x)
    if which == 2:
        if factorized:
            return (
                np.exp(-(alpha**2) / 4.0)
                * matrix_exp(s * system.b)
                @ matrix_exp(-s * system.a)
            )
        _, p = position_momentum(system)
        return matrix_exp(-1j * alpha * p)
    raise UsageError(f"unknown translation operator index {which!r}; expected 1 or 2")


def eigen_residuals(system, pair):
    """(r1, r2, r3): eigenrelation and normalization residuals of a pair.

    r1 = ||a phi(z) - z phi(z)|| and r2 = ||b^dag psi(z) - z psi(z)||,
    both restricted to safe-block components; r3 = |<phi(z), psi(z)> - 1|.
    """
    ns = system.n_safe
    z = pair.z
    r1 = np.linalg.norm((system.a @ pair.phi_z - z * pair.phi_z)[: ns + 1])
    r2 = np.linalg.norm((system.b.conj().T @ pair.psi_z - z * pair.psi_z)[: ns + 1])
    r3 = abs(np.vdot(pair.phi_z, pair.psi_z) - 1.0)
    return float(r1), float(r2), float(r3)


@dataclass(frozen=True)
class DiscQuadrature:
    """Quadrature over the disc |z| <= R: Gauss-Legendre in the radius
    crossed with a uniform (trapezoid-on-periodic) rule in the angle."""

    radius: float
    n_radial: int = 64
    n_angular: int = 64

    def __post_init__(self):
        if self.radius <= 0:
            raise NumericInputError(f"disc radius must be positive, got {self.radius}")
        if self.n_radial < 4 or self.n_angular < 8:
            raise UsageError("need n_radial >= 4 and n_angular >= 8")

    def nodes(self):
        """(z, w): complex nodes and positive weights with sum(w) = pi R^2."""
        x, u = np.polynomial.legendre.leggauss(self.n_radial)
        r = 0.5 * self.radius * (x + 1.0)
        ur = 0.5 * self.radius * u * r  # radial weight including the Jacobian r
        theta = 2.0 * np.pi * np.arange(self.n_angular) / self.n_angular
        w_ang = 2.0 * np.pi / self.n_angular
        z = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
        w = np.broadcast_to(ur[:, None] * w_ang, (self.n_radial, self.n_angular)).ravel()
        return z, w.copy()


def default_disc_quadrature(dim, n_radial=64, n_angular=64):
    """Disc radius 0.75 sqrt(2 dim): inside the reliable truncated region."""
    return DiscQuadrature(0.75 * np.sqrt(2.0 * dim), n_radial, n_angular)


def resolution_quadrature(system, f, g, quad):
    """Discretized resolution of the identity
    (1/pi) integral <f, phi(z)> <psi(z), g> d^2z over the disc.

    Converges to <f, g> as the disc covers the states that matter.  A
    coverage warning fires when R^2 < 4 * (highest populated mode).
    """
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    top = 0
    for vec in (f, g):
        nz = np.nonzero(np.abs(vec) > 1e-13)[0]
        if nz.size:
            top = max(top, int(nz[-1]))
    if quad.radius**2 < 4.0 * max(top, 1):
        warnings.warn(
            f"disc R^2 = {quad.radius**2:.3g} < 4*max_mode = {4 * top}; "
            "quadrature may not cover the requested modes",
            stacklevel=2,
        )
    z, w = quad.nodes()
    C = coherent_table(z, system.dim)
    u = system.phi.T @ np.conj(f)          # u_k = <f, phi_k>
    v = np.conj(system.psi.T @ np.conj(g)) # v_k = conj(<g, psi_k>) = <psi_k, g>
    t = quad_node_products(C, u, v, w)
    return complex(pairwise_sum(t) / np.pi)


def weyl_factorization_check(system, alpha, n_modes=16, tol_profile=None, seed=321):
    """Compare ordered factorizations against direct exponentials.

    Four deviations, all measured on the first ``n_modes`` columns
    (clipped to the safe block):

    * ``weyl_x_factorization`` — T1 product form vs exp(i alpha x);
    * ``weyl_p_factorization`` — T2 product form vs exp(-i alpha p);
    * ``adjoint_pairing``      — <exp(-i alpha x^dag) g, f> vs
      <g, exp(i alpha x) f> on random safe-mode probes;
    * ``sigma2_series``        — exp(gamma b) phi_n against the explicit
      raising series sum_k gamma^k/k! sqrt((n+k)!/n!) phi_{n+k} with
      gamma = i alpha / sqrt(2).
    """
    tols = dict(DEFAULT_TOLERANCES)
    if tol_profile:
        tols.update(tol_profile)
    rep = StructureReport()
    alpha = float(alpha)
    m = min(int(n_modes), system.n_safe + 1)

    t1_fact = translation_operator(system, alpha, 1, factorized=True)
    t1_direct = translation_operator(system, alpha, 1, factorized=False)
    rep.add(
        "weyl_x_factorization",
        np.max(np.abs((t1_fact - t1_direct)[:, :m])),
        tols["weyl_x_factorization"],
    )

    t2_fact = translation_operator(system, alpha, 2, factorized=True)
    t2_direct = translation_operator(system, alpha, 2, factorized=False)
    rep.add(
        "weyl_p_factorization",
        np.max(np.abs((t2_fact - t2_direct)[:, :m])),
        tols["weyl_p_factorization"],
    )

    x, _ = position_momentum(system)
    xdag_exp = matrix_exp(-1j * alpha * x.conj().T)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(8):
        f = np.zeros(system.dim, dtype=np.complex128)
        g = np.zeros(system.dim, dtype=np.complex128)
        f[:m] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        g[:m] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        f /= np.linalg.norm(f)
        g /= np.linalg.norm(g)
        lhs = np.vdot(xdag_exp @ g, f)
        rhs = np.vdot(g, t1_direct @ f)
        worst = max(worst, abs(lhs - rhs))
    rep.add("adjoint_pairing", worst, tols["adjoint_pairing"])

    gamma = 1j * alpha / np.sqrt(2.0)
    sigma2 = matrix_exp(gamma * system.b)
    dev = 0.0
    n_sigma = min(5, m)
    for n in range(n_sigma):
        direct = sigma2 @ system.phi[:, n]
        series = np.zeros(system.dim, dtype=np.complex128)
        log_nfact_ratio = 0.0  # log((n+k)!/n!) accumulated incrementally
        logg = np.log(abs(gamma)) if gamma != 0 else -np.inf
        phase = gamma / abs(gamma) if gamma != 0 else 0.0
        term_log = 0.0
        for k in range(system.dim - n):
            if k > 0:
                log_nfact_ratio += np.log(n + k)
                term_log += logg - np.log(k)
            coeff = (phase**k) * np.exp(term_log + 0.5 * log_nfact_ratio)
            series += coeff * system.phi[:, n + k]
        dev = max(dev, float(np.max(np.abs((direct - series)[: system.n_safe + 1]))))
    rep.add("sigma2_series", dev, tols["sigma2_series"])
    rep.note(f"sigma2 series checked for n < {n_sigma}, gamma = i*alpha/sqrt(2)")
    return rep
