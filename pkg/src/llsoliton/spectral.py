"""Linearized operators around the soliton and their spectral diagnostics.

Assembled objects (all dense symmetric, acting on stacked [eps_v; eps_w]
node samples with the uniform mass h*I):

  * H_c  -- the Hessian of E - cP at Q_c.  Its divergence-form block is
    discretized as Re(C^H diag(1/(1-v_c^2)) C) where C is the complex
    spectral derivative matrix carrying the full |k| = pi/h weight at the
    Nyquist mode.  Dropping the Nyquist weight (the usual choice for odd
    derivatives of real fields) opens a zero-kinetic-energy channel that
    manufactures a spurious second negative eigenvalue at small |c|.
  * T_c  -- the companion operator of the localized quadratic form, kept in
    its published coefficient form; only its dispersive-branch essential
    edge tau_c is consumed downstream.
  * M_c  -- the bounded matrix profile with M_c Q_c proportional to the
    swapped derivative S dx Q_c.  The (1,1) denominator admits two readings;
    ``resolve_mc_reading`` adopts the one that reproduces the kernel relation
    at discretization accuracy (the squared reading, with factor -1).

The localized form G_c is evaluated three ways: the operator path
2<S M_c u, H_c(-2 dx u)>, the sum-of-squares path, and the substituted path
K_c.  The sum-of-squares weights are (2, 6): the factor 6 (not 3) on the
second square is forced both by symbolic reduction of the operator path
modulo the soliton ODE and by quadrature to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .grid import Grid, HydroPair
from .soliton import _check_speed, d_dc_soliton, d_dx_soliton, kappa_of, soliton_hydro


class SpectralError(RuntimeError):
    """A spectral claim of the theory failed numerically (e.g. a second
    negative eigenvalue): indicates a discretization bug, not a tolerance."""


# -- grids and derivative matrices --------------------------------------------

_EIGH_SIZES = (256, 384, 512, 768, 1024, 1536, 2048, 3072, 4096)


def spectral_grid(c: float, L_max: float = 40.0) -> Grid:
    """Per-speed grid for operator work.

    The coefficient 1/(1 - v_c^2) has complex poles at distance
    arccos(kappa)/kappa from the real axis, so its spectral tail decays like
    exp(-delta k).  Resolution is chosen so delta * k_max >= 26 (products
    then alias below 1e-8) while L keeps exp(-kappa L) small.
    """
    k = kappa_of(c)
    delta = float(np.arccos(min(k, 1.0)) / k) if k < 1.0 else np.inf
    L = min(L_max, max(20.0, 24.0 / k))
    n_min = 2.0 * L * 26.0 / (np.pi * delta)
    for n in _EIGH_SIZES:
        if n >= n_min:
            return Grid(L, n)
    return Grid(L, _EIGH_SIZES[-1])


def derivative_matrix(grid: Grid) -> np.ndarray:
    """Real antisymmetric spectral d/dx (Nyquist dropped)."""
    n = grid.n
    F = np.fft.fft(np.eye(n), axis=0)
    w = 1j * grid.k.copy()
    w[n // 2] = 0.0
    D = np.real(np.fft.ifft(w[:, None] * F, axis=0))
    return 0.5 * (D - D.T)


def divergence_block(grid: Grid, m: np.ndarray) -> np.ndarray:
    """Symmetric PSD discretization of -d/dx ( m(x) d/dx . ).

    Assembled as Re(C^H diag(m) C) with the full Nyquist weight pi/h in C,
    so no sawtooth mode rides for free through the kinetic term.
    """
    n = grid.n
    kk = grid.k.copy()
    kk[n // 2] = np.pi / grid.h
    F = np.fft.fft(np.eye(n), axis=0)
    C = np.fft.ifft((1j * kk)[:, None] * F, axis=0)
    K = np.real(C.conj().T @ (m[:, None] * C))
    return 0.5 * (K + K.T)


# -- H_c ------------------------------------------------------------------------


def _hc_coefficients(grid: Grid, c: float):
    q = soliton_hydro(c, 0.0, grid)
    v = q.v
    d = 1.0 - v * v
    phi = (1.0 + v * v) / d
    pot = (1.0 - c * c - (5.0 + c * c) * v * v + 2.0 * v**4) / d**2 + c * c * phi * phi / d
    return v, d, phi, pot


def assemble_Hc(grid: Grid, c: float) -> "OperatorMatrix":
    """Dense symmetric H_c: [[L_c + c^2 phi^2/d, -c phi], [-c phi, d]]."""
    _check_speed(c)
    v, d, phi, pot = _hc_coefficients(grid, c)
    n = grid.n
    H = np.zeros((2 * n, 2 * n))
    H[:n, :n] = divergence_block(grid, 1.0 / d) + np.diag(pot)
    H[:n, n:] = np.diag(-c * phi)
    H[n:, :n] = np.diag(-c * phi)
    H[n:, n:] = np.diag(d)
    H = 0.5 * (H + H.T)
    return OperatorMatrix(H, grid, "H_c", c)


def apply_Hc(grid: Grid, c: float, eps: HydroPair) -> HydroPair:
    """Matrix-free H_c application with spectral derivatives."""
    v, d, phi, pot = _hc_coefficients(grid, c)
    ev, ew = eps.v, eps.w
    h1 = -grid.derivative(grid.derivative(ev, 1) / d, 1) + pot * ev - c * phi * ew
    h2 = -c * phi * ev + d * ew
    return HydroPair(h1, h2)


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray
    grid: Grid
    tag: str
    c: float

    def symmetry_defect(self) -> float:
        a = self.matrix
        return float(np.max(np.abs(a - a.T)) / np.max(np.abs(a)))

    def scale(self) -> float:
        """Row-sum norm: an upper bound for the spectral radius."""
        return float(np.max(np.abs(self.matrix).sum(axis=1)))


@dataclass(frozen=True)
class EigenResult:
    """Negative eigenpair of H_c plus neighbouring spectrum.

    chi is L2 x L2 normalized with zeta(0) > 0; lambda_tilde > 0 stores the
    magnitude of the unique negative eigenvalue.
    """

    c: float
    lambda_tilde: float
    chi: HydroPair
    kernel_eigenvalue: float
    next_eigenvalue: float
    scale: float
    grid: Grid

    @property
    def b_c(self) -> float:
        lam = self.lambda_tilde
        return float(np.sqrt((1.0 - self.c**2 + 2.0 * lam + lam * lam) / (1.0 + lam)))

    @property
    def decay_rate_bound(self) -> float:
        return min(2.0 * kappa_of(self.c), self.b_c)


def negative_eigenpair(grid: Grid, c: float, operator: OperatorMatrix | None = None) -> EigenResult:
    """The unique negative eigenvalue of H_c and its normalized eigenvector.

    Hard failure if the count of eigenvalues below -1e-8 * scale is not one:
    a second negative mode contradicts the linearization theory and always
    traced back to a discretization bug in this code base.
    """
    op = operator if operator is not None else assemble_Hc(grid, c)
    H = op.matrix
    scale = op.scale()
    w, V = eigh(H, subset_by_index=[0, 3])
    tol = 1e-8 * scale
    n_neg = int(np.sum(w < -tol))
    if n_neg != 1:
        raise SpectralError(
            f"H_c at c={c}: expected exactly one negative eigenvalue, found {n_neg} "
            f"below {-tol:.3e} (lowest: {w})"
        )
    n = grid.n
    vec = V[:, 0] / np.sqrt(grid.h)
    i0 = int(np.argmin(np.abs(grid.x)))
    if vec[i0] < 0:
        vec = -vec
    chi = HydroPair(vec[:n].copy(), vec[n:].copy())
    return EigenResult(c=c, lambda_tilde=float(-w[0]), chi=chi,
                       kernel_eigenvalue=float(w[1]), next_eigenvalue=float(w[2]),
                       scale=scale, grid=grid)


@dataclass(frozen=True)
class DecayFit:
    """Log-linear tail fit of |chi_c|."""

    rate: float
    sqrt_1mc2: float
    b_c: float
    a_c: float
    n_points: int
    window: tuple[float, float]

    @property
    def margin(self) -> float:
        return self.rate - self.sqrt_1mc2


def chi_decay(grid: Grid, result: EigenResult, window: tuple[float, float] | None = None,
              floor_rel: float = 1e-11) -> DecayFit:
    """Fit |chi_c| ~ exp(-rate |x|) on |x| in [L/4, L/2].

    Nodes where the amplitude has dropped to the eigensolver noise floor are
    excluded; this is the window shrink the fit reports through n_points.
    """
    lo, hi = window if window is not None else (grid.L / 4.0, grid.L / 2.0)
    amp = np.hypot(result.chi.v, result.chi.w)
    floor = floor_rel * float(np.max(amp))
    mask = (np.abs(grid.x) >= lo) & (np.abs(grid.x) <= hi) & (amp > floor)
    if mask.sum() < 8:
        mask = (np.abs(grid.x) >= lo) & (amp > floor)
    if mask.sum() < 8:
        raise SpectralError("chi tail fit: too few nodes above the noise floor")
    A = np.vstack([np.ones(mask.sum()), -np.abs(grid.x[mask])]).T
    coef, *_ = np.linalg.lstsq(A, np.log(amp[mask]), rcond=None)
    return DecayFit(rate=float(coef[1]), sqrt_1mc2=kappa_of(result.c),
                    b_c=result.b_c, a_c=result.decay_rate_bound,
                    n_points=int(mask.sum()),
                    window=(float(lo), float(hi)))


# -- T_c and the essential-spectrum edge ----------------------------------------


def _tc_coefficients(grid: Grid, c: float):
    q = soliton_hydro(c, 0.0, grid)
    v = q.v
    # mu/v^2 = 3 - 2c^2 - 3v^2 stays O(1); all ratios below are regular forms
    m32 = 3.0 - 2.0 * c * c - 3.0 * v * v
    off = -c * (2.0 * c * c - 1.0 + v * v) / (1.0 - v * v)
    pot = (2.0 * v * v * (3.0 - 4.0 * c * c - 3.0 * v * v) / m32**2
           + 4.0 * (1.0 - c * c - v * v) / m32
           + c * c * (2.0 * c * c - 1.0 + v * v) ** 2 / (m32 * (1.0 - v * v) ** 2))
    return v, m32, off, pot


def assemble_Tc(grid: Grid, c: float) -> OperatorMatrix:
    _check_speed(c)
    v, m32, off, pot = _tc_coefficients(grid, c)
    n = grid.n
    T = np.zeros((2 * n, 2 * n))
    T[:n, :n] = 3.0 * divergence_block(grid, 1.0 / m32) + np.diag(pot)
    T[:n, n:] = np.diag(off)
    T[n:, :n] = np.diag(off)
    T[n:, n:] = np.diag(m32)
    T = 0.5 * (T + T.T)
    return OperatorMatrix(T, grid, "T_c", c)


def tau_components(c: float) -> tuple[float, float]:
    _check_speed(c)
    A = (4.0 * (1.0 - c * c) + c * c * (2.0 * c * c - 1.0) ** 2) / (3.0 - 2.0 * c * c)
    tau1 = 0.5 * A + 0.5 * (3.0 - 2.0 * c * c)
    tau2 = (A - (3.0 - 2.0 * c * c)) ** 2 + 4.0 * c * c * (2.0 * c * c - 1.0) ** 2
    return tau1, tau2


def tau_edge(c: float) -> float:
    """Closed-form dispersive essential-spectrum edge tau_c = tau1 - sqrt(tau2)/2."""
    tau1, tau2 = tau_components(c)
    return tau1 - 0.5 * float(np.sqrt(tau2))


@dataclass(frozen=True)
class EdgeEstimate:
    tau_numeric: float
    tau_closed: float
    n_localized: int
    eigenvalues: np.ndarray


def essential_edge_numeric(c: float, L: float = 80.0, n: int = 1024,
                           core_radius: float = 10.0) -> EdgeEstimate:
    """Bottom of T_c's dispersive branch from a dense eigensolve.

    T_c also carries spectrum below tau_c coming from its multiplication
    sector (the range of mu/v^2 dips to c^2 near the soliton); those modes
    are spatially localized and are filtered out by the core-mass test.  The
    extended modes converge to tau_c from above as L grows (Weyl).
    """
    grid = Grid(L, n)
    tc = tau_edge(c)
    T = assemble_Tc(grid, c).matrix
    w, V = eigh(T, subset_by_value=(-np.inf, 1.3 * tc))
    if w.size == 0:
        raise SpectralError(f"no T_c eigenvalues found below 1.3*tau at c={c}")
    core = np.abs(grid.x) <= core_radius
    mask2 = np.concatenate([core, core])
    frac = (V[mask2, :] ** 2).sum(axis=0)
    extended = w[frac < 0.4]
    if extended.size == 0:
        raise SpectralError(f"no extended T_c modes below 1.3*tau at c={c}; raise the window")
    return EdgeEstimate(tau_numeric=float(extended[0]), tau_closed=tc,
                        n_localized=int(np.sum(frac >= 0.4)), eigenvalues=w)


# -- M_c and the localized form G_c ----------------------------------------------


@dataclass(frozen=True)
class MatrixField:
    """Nodewise symmetric 2x2 matrix profile (m22 = 0 for M_c)."""

    m11: np.ndarray
    m12: np.ndarray
    m22: np.ndarray

    def apply(self, u: HydroPair) -> HydroPair:
        return HydroPair(self.m11 * u.v + self.m12 * u.w,
                         self.m12 * u.v + self.m22 * u.w)

    def max_norm(self) -> float:
        return float(max(np.max(np.abs(self.m11)), np.max(np.abs(self.m12)),
                         np.max(np.abs(self.m22))))


def matrix_Mc(grid: Grid, c: float, reading: str = "squared") -> MatrixField:
    """M_c entries; reading selects the (1,1) denominator:
    'squared' -> (1 - v_c^2)^2, 'literal' -> (1 - v_c)^2."""
    _check_speed(c)
    q = soliton_hydro(c, 0.0, grid)
    dq = d_dx_soliton(c, 0.0, grid)
    k = kappa_of(c)
    m12 = k * np.tanh(k * grid.x)          # -dx v_c / v_c, division-free
    if reading == "squared":
        m11 = -2.0 * c * q.v * dq.v / (1.0 - q.v**2) ** 2
    elif reading == "literal":
        m11 = -2.0 * c * q.v * dq.v / (1.0 - q.v) ** 2
    else:
        raise ValueError(f"unknown M_c reading {reading!r}")
    return MatrixField(m11, m12, np.zeros_like(m11))


@dataclass(frozen=True)
class McResolution:
    reading: str
    sign: float
    residuals: dict


def resolve_mc_reading(grid: Grid, c: float, tol: float = 1e-8) -> McResolution:
    """Adopt the (1,1) reading for which M_c Q_c lands in the span of the
    swapped derivative S dx Q_c, and report the proportionality sign."""
    q = soliton_hydro(c, 0.0, grid)
    dq = d_dx_soliton(c, 0.0, grid)
    target = np.concatenate([dq.w, dq.v])          # S dx Q_c
    tnorm = np.linalg.norm(target)
    residuals = {}
    best = None
    for reading in ("squared", "literal"):
        mq = matrix_Mc(grid, c, reading).apply(q)
        vec = np.concatenate([mq.v, mq.w])
        for sign in (1.0, -1.0):
            r = float(np.linalg.norm(vec - sign * target) / tnorm)
            residuals[(reading, sign)] = r
            if best is None or r < best[2]:
                best = (reading, sign, r)
    reading, sign, r = best
    if r > tol:
        raise SpectralError(f"no M_c reading reproduces the kernel relation: best {r:.2e}")
    return McResolution(reading=reading, sign=sign, residuals=residuals)


def _gc_coefficients(grid: Grid, c: float):
    """Regularized closed forms: every division by v_c or mu_c is removed."""
    q = soliton_hydro(c, 0.0, grid)
    dq = d_dx_soliton(c, 0.0, grid)
    v, dv = q.v, dq.v
    k = kappa_of(c)
    m32 = 3.0 - 2.0 * c * c - 3.0 * v * v      # mu / v^2
    mu = v * v * m32
    dlog = -k * np.tanh(k * grid.x)            # dx v_c / v_c
    cv2_over_mu = c / m32                      # c v^2 / mu
    beta = 2.0 * c * dlog / (m32 * (1.0 - v * v))   # 2 c v dv / (mu (1-v^2))
    v4_over_mu = v * v / m32                   # v^4 / mu
    return v, dv, mu, m32, dlog, cv2_over_mu, beta, v4_over_mu


@dataclass(frozen=True)
class GcValues:
    operator_path: float
    squares_path: float

    @property
    def rel_diff(self) -> float:
        scale = max(abs(self.operator_path), abs(self.squares_path), 1e-300)
        return abs(self.operator_path - self.squares_path) / scale


def form_Gc(grid: Grid, c: float, u: HydroPair, mc_reading: str = "squared") -> GcValues:
    """G_c(u) by the operator path 2<S M_c u, H_c(-2 dx u)> and by the
    sum of squares 2 int mu (.)^2 + 6 int (v^4/mu) (.)^2.

    The published second factor reads 3; the symbolic reduction of the
    operator path modulo the soliton ODE forces 6, and only 6 matches the
    operator path numerically (machine precision on decaying fields).
    """
    M = matrix_Mc(grid, c, mc_reading)
    Mu = M.apply(u)
    SMu = HydroPair(Mu.w, Mu.v)
    Hdu = apply_Hc(grid, c, HydroPair(-2.0 * grid.derivative(u.v, 1),
                                      -2.0 * grid.derivative(u.w, 1)))
    path_a = 2.0 * float(grid.integrate(SMu.v * Hdu.v + SMu.w * Hdu.w))

    v, dv, mu, m32, dlog, cv2_over_mu, beta, v4_over_mu = _gc_coefficients(grid, c)
    du1 = grid.derivative(u.v, 1)
    b1 = u.w - cv2_over_mu * u.v - beta * du1
    b2 = du1 - dlog * u.v
    path_b = float(2.0 * grid.integrate(mu * b1 * b1) + 6.0 * grid.integrate(v4_over_mu * b2 * b2))
    return GcValues(path_a, path_b)


def gc_scale(grid: Grid, c: float, u: HydroPair) -> float:
    """Cancellation-free magnitude of the G_c squares: same integrals with the
    bracket squares replaced by sums of squares of their terms."""
    v, dv, mu, m32, dlog, cv2_over_mu, beta, v4_over_mu = _gc_coefficients(grid, c)
    du1 = grid.derivative(u.v, 1)
    s1 = u.w**2 + (cv2_over_mu * u.v) ** 2 + (beta * du1) ** 2
    s2 = du1**2 + (dlog * u.v) ** 2
    return float(2.0 * grid.integrate(mu * s1) + 6.0 * grid.integrate(v4_over_mu * s2))


def form_Kc(grid: Grid, c: float, u: HydroPair) -> float:
    """Third path: K_c on the substituted pair (v_c u1, v_c u2).

    Weights (6, 2); the published display carries none and its companion
    lemma implies (3, 2), but only (6, 2) agrees with the other two paths.
    """
    v, dv, mu, m32, dlog, cv2_over_mu, beta, v4_over_mu = _gc_coefficients(grid, c)
    v1, v2 = v * u.v, v * u.w
    dv1 = grid.derivative(v1, 1)
    lam_over = c * (1.0 - 2.0 * c * c - v * v) / (m32 * (1.0 - v * v))  # c lam_c/(mu(1-v^2))
    t1 = dv1 - 2.0 * dlog * v1
    t2 = v2 + lam_over * v1 - beta * dv1
    return float(6.0 * grid.integrate(t1 * t1 / m32) + 2.0 * grid.integrate(m32 * t2 * t2))


# -- coercivity ---------------------------------------------------------------------


def _b_inv_sqrt_h1(grid: Grid) -> np.ndarray:
    """Dense (DtD + I)^(-1/2) for the H1 block, via the Fourier symbol."""
    n = grid.n
    k2 = grid.k**2
    k2[n // 2] = 0.0      # matches the antisymmetric D with dropped Nyquist
    F = np.fft.fft(np.eye(n), axis=0)
    M = np.real(np.fft.ifft((1.0 / np.sqrt(k2 + 1.0))[:, None] * F, axis=0))
    return 0.5 * (M + M.T)


@dataclass(frozen=True)
class CoercivityResult:
    c: float
    value: float
    grid: Grid
    detail: str = ""


def coercivity_Hc(c: float, grid: Grid | None = None) -> CoercivityResult:
    """Lambda_c = min <H_c e, e>/||e||_{H1xL2}^2 over {e _|_ dx Q_c, chi_c}.

    Solved as a standard symmetric eigenproblem after the exact congruence
    y = B^(1/2) e (B is Fourier-diagonal), with the two constraint directions
    deflated to the top of the spectrum.  Non-positive output is a hard
    failure: the constrained form is positive by the spectral decomposition
    of H_c.
    """
    if grid is None:
        grid = Grid(30.0, 512)
    op = assemble_Hc(grid, c)
    eig = negative_eigenpair(grid, c, operator=op)
    n = grid.n
    Bih = np.zeros((2 * n, 2 * n))
    Bih[:n, :n] = _b_inv_sqrt_h1(grid)
    Bih[n:, n:] = np.eye(n)
    Hp = Bih @ op.matrix @ Bih
    Hp = 0.5 * (Hp + Hp.T)

    dq = d_dx_soliton(c, 0.0, grid)
    # constraints <q, e> = <B^(-1/2) q, y>
    q1 = Bih @ dq.stacked()
    q2 = Bih @ eig.chi.stacked()
    U, _ = np.linalg.qr(np.stack([q1, q2], axis=1))
    shift = 10.0 * op.scale()
    HU = Hp @ U
    Hd = Hp - U @ (U.T @ Hp) - HU @ U.T + U @ (U.T @ HU) @ U.T + shift * (U @ U.T)
    Hd = 0.5 * (Hd + Hd.T)
    lam = float(eigh(Hd, subset_by_index=[0, 0], eigvals_only=True)[0])
    if lam <= 0.0:
        raise SpectralError(f"constrained H_c coercivity non-positive at c={c}: {lam}")
    return CoercivityResult(c=c, value=lam, grid=grid, detail="H1xL2 metric")


def _gc_pencil_scaled(grid: Grid, c: float):
    """Quadratic-form matrices of G_c and the exp(-2|x|)-weighted X-norm in
    the scaled variable u = exp(|x|) * u~.

    The scaling makes the weighted norm O(1)-conditioned; the G-side
    coefficients grow like exp(2(1-kappa)|x|), which stays representable for
    the short window grids used here.
    """
    v, dv, mu, m32, dlog, cv2_over_mu, beta, v4_over_mu = _gc_coefficients(grid, c)
    n = grid.n
    D = derivative_matrix(grid)
    s = np.sign(grid.x)
    e2 = np.exp(2.0 * np.abs(grid.x))
    Ds = D + np.diag(s)

    # bracket1 = u2~ - cv2_over_mu u1~ - beta (D + s) u1~, weight 2 mu e^{2|x|}
    A1_left = -np.diag(cv2_over_mu) - beta[:, None] * Ds
    # bracket2 = (D + s - dlog) u1~, weight 6 (v^4/mu) e^{2|x|}
    A2_left = Ds - np.diag(dlog)

    w1 = grid.h * 2.0 * mu * e2
    w2 = grid.h * 6.0 * v4_over_mu * e2
    G = np.zeros((2 * n, 2 * n))
    G[:n, :n] = A1_left.T @ (w1[:, None] * A1_left) + A2_left.T @ (w2[:, None] * A2_left)
    G[:n, n:] = A1_left.T @ np.diag(w1)
    G[n:, :n] = G[:n, n:].T
    G[n:, n:] = np.diag(w1)
    G = 0.5 * (G + G.T)

    W = np.zeros((2 * n, 2 * n))
    W[:n, :n] = Ds.T @ (grid.h * Ds) + grid.h * np.eye(n)
    W[n:, n:] = grid.h * np.eye(n)
    W = 0.5 * (W + W.T)
    return G, W


def coercivity_Gc(c: float, grid: Grid | None = None,
                  drop_constraint: bool = False) -> CoercivityResult:
    """Smallest Rayleigh quotient of G_c against the exp(-2|x|)-weighted
    X-norm, under <u, S chi_c> = 0.

    With the constraint dropped, Q_c is admissible and annihilates the PSD
    form, so the minimum is certified to lie in [0, quotient at Q_c]; that
    quotient (discretization-level small) is returned directly rather than
    solving the exponentially ill-conditioned unconstrained pencil.
    """
    if grid is None:
        grid = Grid(16.0, 384)
    if drop_constraint:
        q = soliton_hydro(c, 0.0, grid)
        g = form_Gc(grid, c, q).squares_path
        dv = grid.derivative(q.v, 1)
        dens = (dv**2 + q.v**2 + q.w**2) * np.exp(-2.0 * np.abs(grid.x))
        wnorm = float(grid.integrate(dens))
        return CoercivityResult(c=c, value=g / wnorm, grid=grid,
                                detail="upper bound at Q_c; PSD form, so min in [0, value]")
    G, W = _gc_pencil_scaled(grid, c)
    eig = negative_eigenpair(grid, c)
    # congruence y = W^(1/2) u~ turns the pencil into a standard problem in
    # which the single constraint can be deflated exactly
    ww, WV = eigh(W)
    Wih = (WV / np.sqrt(ww)) @ WV.T
    Gp = Wih @ G @ Wih
    Gp = 0.5 * (Gp + Gp.T)
    qt = np.exp(np.abs(grid.x))
    constraint = np.concatenate([qt * eig.chi.w, qt * eig.chi.v])   # e^{|x|} S chi
    q = Wih @ constraint
    u = q / np.linalg.norm(q)
    shift = 10.0 * float(np.abs(Gp).sum(axis=1).max())
    Gu = Gp @ u
    Gd = Gp - np.outer(u, Gu) - np.outer(Gu, u) + (u @ Gu) * np.outer(u, u) + shift * np.outer(u, u)
    Gd = 0.5 * (Gd + Gd.T)
    lam = float(eigh(Gd, subset_by_index=[0, 0], eigvals_only=True)[0])
    if lam <= 0.0:
        raise SpectralError(f"constrained G_c coercivity non-positive at c={c}: {lam}")
    return CoercivityResult(c=c, value=lam, grid=grid, detail="exp(-2|x|)-weighted X metric")
