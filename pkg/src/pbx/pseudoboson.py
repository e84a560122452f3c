"""Construction and verification of pseudo-bosonic operator pairs.

A system bundles the deformed ladder pair (a, b) with [a, b] = 1 (b not
the adjoint of a), the two biorthogonal vector families phi_n, psi_n it
generates from its vacua, and — for the regular (Riesz) kinds — the
bounded similarity S with phi_n = S e_n, psi_n = S^{-1} e_n and the
metric operator Theta = S^{-2}.

Supported kinds:

* ``identity``        — S = 1, ordinary bosons (sanity anchor).
* ``diagonal_riesz``  — S = diag(s_n), 0 < s_min <= s_n <= s_max.
* ``custom_matrix``   — arbitrary invertible S, symmetrized to its
  self-adjoint positive polar factor.
* ``shifted_oscillator`` — a = c + alpha, b = c^dag + conj(beta); the
  non-self-adjoint shifted harmonic oscillator, genuinely non-regular
  when alpha != beta.

All algebraic identities are finite-dimensional truncations, so every
deviation is measured on the "safe block" of low indices only; the
truncation-corner defect of [c, c^dag] is expected and quantified, never
hidden.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import ConstructionError, DimensionError, UsageError
from .fock import ladder_matrices
from .kernels import coherent_table
from .reporting import DEFAULT_TOLERANCES, StructureReport

__all__ = [
    "SystemSpec",
    "PseudoBosonSystem",
    "build_system",
    "verify_structure",
    "quasi_basis_residual",
    "norm_growth_fit",
    "NormGrowthFit",
]

REGULAR_KINDS = ("identity", "diagonal_riesz", "custom_matrix")
KINDS = REGULAR_KINDS + ("shifted_oscillator",)

_MIN_SINGULAR = 1e-8


@dataclass(frozen=True)
class SystemSpec:
    """Parameters selecting one concrete pseudo-bosonic model."""

    kind: str
    dim: int
    s_values: tuple = ()          # diagonal_riesz: s_0..s_{dim-1}
    s_matrix: np.ndarray = None   # custom_matrix: invertible S
    alpha_shift: complex = 0j     # shifted_oscillator
    beta_shift: complex = 0j
    safe_margin: int = None       # override the kind-dependent default

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown system kind {self.kind!r}; expected one of {KINDS}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise DimensionError(f"dim must be an integer >= 2, got {self.dim}")
        if self.kind == "diagonal_riesz":
            s = np.asarray(self.s_values, dtype=float)
            if s.shape != (self.dim,):
                raise ConstructionError(
                    f"diagonal_riesz needs dim={self.dim} values s_n, got {s.shape}"
                )
            if not np.all(s > 0):
                raise ConstructionError(
                    "diagonal_riesz requires 0 < s_min <= s_n (bounded with bounded "
                    "inverse); got a non-positive entry"
                )
        if self.kind == "custom_matrix":
            if self.s_matrix is None:
                raise ConstructionError("custom_matrix requires s_matrix")
            S = np.asarray(self.s_matrix)
            if S.shape != (self.dim, self.dim):
                raise ConstructionError(
                    f"s_matrix shape {S.shape} does not match dim={self.dim}"
                )

    @property
    def regular(self):
        return self.kind in REGULAR_KINDS


def default_safe_margin(spec):
    """Kind-dependent safe-block margin.

    Banded S keeps the truncation defect in the corner (margin 2); a
    dense custom S smears it across modes (margin dim/4).  For the
    shifted oscillator the families themselves develop coherent tails,
    so the margin grows like (|alpha|+|beta|) sqrt(dim).
    """
    if spec.safe_margin is not None:
        return int(spec.safe_margin)
    if spec.kind == "custom_matrix":
        return max(2, spec.dim // 4)
    if spec.kind == "shifted_oscillator":
        spread = (abs(spec.alpha_shift) + abs(spec.beta_shift)) * np.sqrt(spec.dim)
        return min(spec.dim // 2, max(8, int(np.ceil(spread)) + 8))
    return 2


@dataclass
class PseudoBosonSystem:
    """One constructed pseudo-bosonic structure on a truncated Fock space.

    ``phi`` and ``psi`` hold the families columnwise (column n is
    phi_n resp. psi_n).  ``S``, ``S_inv`` and ``theta`` are present only
    for the regular kinds.
    """

    spec: SystemSpec
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)
    number_op: np.ndarray = field(repr=False)
    safe_margin: int
    S: np.ndarray = field(default=None, repr=False)
    S_inv: np.ndarray = field(default=None, repr=False)
    theta: np.ndarray = field(default=None, repr=False)
    notes: list = field(default_factory=list)

    @property
    def dim(self):
        return self.spec.dim

    @property
    def regular(self):
        return self.spec.regular

    @property
    def n_safe(self):
        """Largest index inside the safe block."""
        return self.dim - 1 - self.safe_margin

    def phi_n(self, n):
        return self.phi[:, n]

    def psi_n(self, n):
        return self.psi[:, n]


def _polar_symmetrize(S):
    """Self-adjoint positive polar factor of S, with its condition number."""
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= _MIN_SINGULAR:
        raise ConstructionError(
            f"custom S is numerically singular: smallest singular value "
            f"{sv[-1]:.3e} <= {_MIN_SINGULAR:.0e} (condition number {sv[0] / max(sv[-1], 1e-300):.3e})"
        )
    _, P = scipy.linalg.polar(S)
    P = 0.5 * (P + P.conj().T)
    return P, sv[0] / sv[-1]


def build_system(spec):
    """Build the full system for ``spec``.

    Regular kinds: a = S c S^{-1}, b = S c^dag S^{-1}, phi_n = S e_n,
    psi_n = S^{-1} e_n, theta = S^{-2} (S self-adjoint positive).

    Shifted oscillator: a = c + alpha, b = c^dag + conj(beta); phi_0 is
    the unit-norm truncated coherent vector annihilated by a, psi_0 the
    one annihilated by b^dag = c + beta, carrying the full normalization
    so that <phi_0, psi_0> = 1; the families follow from
    phi_n = b^n phi_0 / sqrt(n!), psi_n = (a^dag)^n psi_0 / sqrt(n!).
    """
    dim = spec.dim
    c, cdag = ladder_matrices(dim)
    margin = default_safe_margin(spec)
    notes = []

    if spec.regular:
        if spec.kind == "identity":
            S = np.eye(dim, dtype=np.complex128)
            S_inv = S.copy()
        elif spec.kind == "diagonal_riesz":
            s = np.asarray(spec.s_values, dtype=float)
            S = np.diag(s).astype(np.complex128)
            S_inv = np.diag(1.0 / s).astype(np.complex128)
        else:
            S_raw = np.asarray(spec.s_matrix, dtype=np.complex128)
            S, cond = _polar_symmetrize(S_raw)
            herm_gap = np.max(np.abs(S_raw - S_raw.conj().T))
            if herm_gap > 1e-12:
                notes.append(
                    f"custom S symmetrized via polar decomposition "
                    f"(max |S - S^dag| was {herm_gap:.3e}, condition number {cond:.3e})"
                )
            S_inv = np.linalg.inv(S)
        a = S @ c @ S_inv
        b = S @ cdag @ S_inv
        phi = S.copy()
        psi = S_inv.conj().T.copy()  # (S^{-1})^dag = S^{-1} for self-adjoint S
        theta = S_inv @ S_inv
    else:
        al, be = complex(spec.alpha_shift), complex(spec.beta_shift)
        a = c + al * np.eye(dim)
        b = cdag + np.conj(be) * np.eye(dim)
        phi0 = coherent_table(-al, dim)[0]
        phi0 = phi0 / np.linalg.norm(phi0)
        psi0 = coherent_table(-be, dim)[0]
        pairing = np.vdot(phi0, psi0)
        if abs(pairing) < 1e-14:
            raise ConstructionError(
                f"<phi_0, psi_0> = {pairing:.3e} is numerically zero; cannot "
                "normalize (alpha/beta too far apart for this truncation)"
            )
        psi0 = psi0 / np.conj(pairing)
        phi = np.empty((dim, dim), dtype=np.complex128)
        psi = np.empty((dim, dim), dtype=np.complex128)
        phi[:, 0] = phi0
        psi[:, 0] = psi0
        adag = a.conj().T
        for n in range(dim - 1):
            phi[:, n + 1] = b @ phi[:, n] / np.sqrt(n + 1.0)
            psi[:, n + 1] = adag @ psi[:, n] / np.sqrt(n + 1.0)
        S = S_inv = theta = None

    return PseudoBosonSystem(
        spec=spec,
        a=a,
        b=b,
        phi=phi,
        psi=psi,
        number_op=b @ a,
        safe_margin=margin,
        S=S,
        S_inv=S_inv,
        theta=theta,
        notes=notes,
    )


def _safe_max_abs(arr, n_safe):
    """Max abs over entries with every index inside the safe block."""
    arr = np.asarray(arr)
    sl = (slice(0, n_safe + 1),) * arr.ndim
    return float(np.max(np.abs(arr[sl])))


def verify_structure(system, tol_profile=None, n_probes=100, seed=1234):
    """Measure the full algebraic structure on the safe block.

    Checks: the four ladder relations, biorthogonality of the families,
    the number-operator eigenvalue equations, the commutator [a, b] = 1,
    and (regular kinds) Theta-conjugation psi_n = Theta phi_n with
    positivity of Theta, plus the similarity relations that pull (a, b)
    back to (c, c^dag).
    """
    tols = dict(DEFAULT_TOLERANCES)
    if tol_profile:
        tols.update(tol_profile)
    rep = StructureReport()
    dim, ns = system.dim, system.n_safe
    if ns < 1:
        raise UsageError(f"safe block empty: margin {system.safe_margin} at dim {dim}")
    a, b, phi, psi = system.a, system.b, system.phi, system.psi
    sq = np.sqrt(np.arange(dim + 1, dtype=float))

    # Ladder relations (Eq. for b phi_n etc.); residual components and the
    # tested n both restricted to the safe block.
    b_phi = b @ phi[:, : ns + 1]
    dev = b_phi[: ns + 1] - (phi[: ns + 1, 1 : ns + 2] * sq[1 : ns + 2])
    rep.add("ladder_b_phi", np.max(np.abs(dev)), tols["ladder_b_phi"])

    a_phi = a @ phi[:, : ns + 1]
    target = np.zeros_like(a_phi)
    target[:, 1:] = phi[:, :ns] * sq[1 : ns + 1]
    rep.add("ladder_a_phi", _safe_max_abs(a_phi - target, ns), tols["ladder_a_phi"])

    adag_psi = a.conj().T @ psi[:, : ns + 1]
    dev = adag_psi[: ns + 1] - (psi[: ns + 1, 1 : ns + 2] * sq[1 : ns + 2])
    rep.add("ladder_adag_psi", np.max(np.abs(dev)), tols["ladder_adag_psi"])

    bdag_psi = b.conj().T @ psi[:, : ns + 1]
    target = np.zeros_like(bdag_psi)
    target[:, 1:] = psi[:, :ns] * sq[1 : ns + 1]
    rep.add("ladder_bdag_psi", _safe_max_abs(bdag_psi - target, ns), tols["ladder_bdag_psi"])

    # Biorthogonality <phi_n, psi_m> = delta_nm on the safe block.
    gram = phi.conj().T @ psi
    rep.add(
        "biorthogonality",
        _safe_max_abs(gram - np.eye(dim), ns),
        tols["biorthogonality"],
    )

    # Number-operator eigenvalue equations.
    N = system.number_op
    n_idx = np.arange(ns + 1, dtype=float)
    rep.add(
        "number_phi",
        _safe_max_abs((N @ phi[:, : ns + 1]) - phi[:, : ns + 1] * n_idx, ns),
        tols["number_phi"],
    )
    rep.add(
        "number_psi",
        _safe_max_abs(
            (N.conj().T @ psi[:, : ns + 1]) - psi[:, : ns + 1] * n_idx, ns
        ),
        tols["number_psi"],
    )

    # Commutator restricted to the safe block.
    comm = a @ b - b @ a - np.eye(dim)
    rep.add("commutator", _safe_max_abs(comm, ns), tols["commutator"])

    if system.regular:
        theta = system.theta
        rep.add(
            "theta_conjugation",
            _safe_max_abs(psi - theta @ phi, ns),
            tols["theta_conjugation"],
        )
        rng = np.random.default_rng(seed)
        worst = np.inf
        for _ in range(n_probes):
            f = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            f /= np.linalg.norm(f)
            worst = min(worst, float(np.real(np.vdot(f, theta @ f))))
        rep.add("theta_positivity", max(0.0, -worst), tols["theta_positivity"])
        rep.note(f"theta positivity: min <f, Theta f> over {n_probes} probes = {worst:.6e}")

        # Similarity relations S^{-1} a S e_n = sqrt(n) e_{n-1} and the
        # raising counterpart.
        c, cdag = ladder_matrices(dim)
        low = system.S_inv @ a @ system.S - c
        high = system.S_inv @ b @ system.S - cdag
        rep.add("similarity_lower", _safe_max_abs(low, ns), tols["similarity_lower"])
        rep.add("similarity_raise", _safe_max_abs(high, ns), tols["similarity_raise"])

    rep.add(
        "vacuum_pairing",
        abs(np.vdot(phi[:, 0], psi[:, 0]) - 1.0),
        tols["vacuum_pairing"],
    )
    return rep


def quasi_basis_residual(system, f, g, K):
    """Partial-sum residuals |<f,g> - sum_{n<k} <f,phi_n><psi_n,g>| for k=1..K."""
    if K > system.dim:
        raise UsageError(f"K={K} exceeds dim={system.dim}")
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    exact = np.vdot(f, g)
    terms = (system.phi.conj().T @ f).conj() * (system.psi.conj().T @ g)
    partial = np.cumsum(terms[:K])
    return np.abs(exact - partial)


@dataclass
class NormGrowthFit:
    """Least-squares fit of log ||phi_n|| = n log r + alpha log(n!)."""

    r_phi: float
    alpha_phi: float
    r_psi: float
    alpha_psi: float

    @property
    def admissible(self):
        """Both families satisfy the alpha < 1/2 growth condition."""
        return self.alpha_phi < 0.5 and self.alpha_psi < 0.5


def _fit_growth(norms):
    if np.any(norms <= 0):
        raise ConstructionError("degenerate fit: zero-norm vector in the family")
    n = np.arange(norms.size, dtype=float)
    A = np.column_stack([n, gammaln(n + 1.0)])
    coef, *_ = np.linalg.lstsq(A, np.log(norms), rcond=None)
    return float(np.exp(coef[0])), float(coef[1])


def norm_growth_fit(system):
    """Fit the norm growth of both families over the safe block."""
    if system.dim < 8:
        raise UsageError("norm growth fit needs dim >= 8")
    ns = system.n_safe
    phi_norms = np.linalg.norm(system.phi[:, : ns + 1], axis=0)
    psi_norms = np.linalg.norm(system.psi[:, : ns + 1], axis=0)
    r_phi, al_phi = _fit_growth(phi_norms)
    r_psi, al_psi = _fit_growth(psi_norms)
    return NormGrowthFit(r_phi, al_phi, r_psi, al_psi)
