"""Dense primal-dual interior-point method for block SDPs (HKM direction,
Mehrotra predictor-corrector, infeasible start)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky, eigvalsh, solve_triangular

from .sdp import SdpProblem

STEP = 0.98
SIGMA_MIN, SIGMA_MAX = 0.01, 0.9
BLOWUP = 1e12
MU_BACKTRACK = 8
MU_SLACK = 1.1  # corrector steps may raise mu by at most 10%


@dataclass
class IpmState:
    x: np.ndarray
    S: list
    Y: list
    mu: float
    iteration: int = 0


@dataclass
class SdpSolution:
    status: str  # "optimal", "max-iter", "infeasible-detected", "numerical-error"
    primal_value: float
    dual_value: float
    x: np.ndarray
    S: list
    Y: list
    gap: float
    pinf: float
    dinf: float
    iterations: int
    trace: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _dot(A, B) -> float:
    return float(np.sum(A * B))


class _Blocks:
    """Float view of the problem with block-wise helpers."""

    def __init__(self, p: SdpProblem):
        self.c, self.F0, self.F = p.dense()
        self.diag = [s < 0 for s in p.block_sizes]
        self.sizes = [abs(s) for s in p.block_sizes]
        self.m = p.m
        self.n_total = sum(self.sizes)
        # scale each PSD block, and each row of a diagonal block, to max-abs 1
        self.scale = []
        for b, d in enumerate(self.diag):
            if d:
                s = np.maximum(np.max(np.abs(self.F[b]), axis=0, initial=0), np.abs(self.F0[b]))
                s[s == 0] = 1.0
            else:
                s = max(float(np.max(np.abs(self.F[b]), initial=0)), float(np.max(np.abs(self.F0[b]), initial=0)))
                s = s or 1.0
            self.F[b] = self.F[b] / s
            self.F0[b] = self.F0[b] / s
            self.scale.append(s)

    def unscale(self, S, Y):
        """Blocks of the original problem: S = s * S_scaled, Y = Y_scaled / s."""
        return ([s_ * sc for s_, sc in zip(S, self.scale)],
                [y / sc for y, sc in zip(Y, self.scale)])

    def combo(self, x):
        """sum_i x_i F_i, blockwise."""
        return [np.tensordot(x, F, axes=1) for F in self.F]

    def inner_each(self, Ms):
        """Vector (F_i . M)_i."""
        out = np.zeros(self.m)
        for F, M, d in zip(self.F, Ms, self.diag):
            out += F @ M if d else np.tensordot(F, M, axes=([1, 2], [0, 1]))
        return out

    def gram(self):
        """G_ij = F_i . F_j, used to pull dual steps back onto F . dY = rd."""
        G = np.zeros((self.m, self.m))
        for F in self.F:
            flat = F.reshape(self.m, -1)
            G += flat @ flat.T
        G[np.diag_indices(self.m)] += 1e-14 * max(1.0, float(np.max(np.diag(G), initial=0)))
        return cho_factor(G)

    def identity(self, scale):
        return [np.full(s, scale) if d else scale * np.eye(s) for s, d in zip(self.sizes, self.diag)]


def _inv(S, d):
    if d:
        return 1.0 / S
    L = cholesky(S, lower=True)
    Li = solve_triangular(L, np.eye(len(S)), lower=True)
    return Li.T @ Li


def _max_step(S, dS, d) -> float:
    if d:
        neg = dS < 0
        return float(np.min(-S[neg] / dS[neg])) if neg.any() else np.inf
    if len(S) == 0:
        return np.inf
    L = cholesky(S, lower=True)
    W = solve_triangular(L, dS, lower=True)
    W = solve_triangular(L, W.T, lower=True)
    lam = eigvalsh((W + W.T) / 2)[0]
    return -1.0 / lam if lam < 0 else np.inf


def _frob(blocks) -> float:
    return float(np.sqrt(sum(np.sum(b * b) for b in blocks)))


def ipm_solve(p: SdpProblem, tol: float = 1e-8, max_iter: int = 100,
              init_scale: float | None = None) -> SdpSolution:
    B = _Blocks(p)
    m = B.m
    scale = max([1.0, float(np.max(np.abs(B.c), initial=0))]
                + [float(np.max(np.abs(F0), initial=0)) for F0 in B.F0])
    lam = init_scale if init_scale is not None else 100.0 * scale
    st = IpmState(np.zeros(m), B.identity(lam), B.identity(lam), lam * lam)
    try:
        gram = B.gram()
    except LinAlgError:
        gram = None
    norm_F0 = _frob(B.F0)
    norm_c = float(np.linalg.norm(B.c))
    trace = []

    best = None  # (merit, x, S, Y, pinf, dinf)

    def finish(status):
        x, S_, Y_, pi, di = st.x, st.S, st.Y, pinf, dinf
        if status != "optimal" and best is not None:
            _, x, S_, Y_, pi, di = best
        pobj = float(B.c @ x)
        dobj = sum(_dot(F0, Y) for F0, Y in zip(B.F0, Y_))
        S_, Y_ = B.unscale(S_, Y_)
        return SdpSolution(status, p.user_value(pobj), p.user_value(dobj), x, S_, Y_,
                           abs(pobj - dobj), pi, di, st.iteration, trace)

    pinf = dinf = np.inf
    for it in range(max_iter + 1):
        st.iteration = it
        FX = B.combo(st.x)
        Rp = [fx - f0 - s for fx, f0, s in zip(FX, B.F0, st.S)]
        rd = B.c - B.inner_each(st.Y)
        mu = sum(_dot(s, y) for s, y in zip(st.S, st.Y)) / B.n_total
        st.mu = mu
        pobj = float(B.c @ st.x)
        dobj = sum(_dot(F0, Y) for F0, Y in zip(B.F0, st.Y))
        pinf = _frob(Rp) / (1.0 + norm_F0)
        dinf = float(np.linalg.norm(rd)) / (1.0 + norm_c)
        rgap = abs(pobj - dobj) / max(1.0, (abs(pobj) + abs(dobj)) / 2)
        trace.append({"iter": it, "mu": mu, "pobj": pobj, "dobj": dobj, "rgap": rgap,
                      "pinf": pinf, "dinf": dinf})
        if rgap <= tol and pinf <= tol and dinf <= tol:
            return finish("optimal")
        merit = max(rgap, pinf, dinf)
        if best is None or merit < best[0]:
            best = (merit, st.x, st.S, st.Y, pinf, dinf)
        elif merit > 1e3 * best[0] and best[0] < 1e-5:
            # iterates are degrading after near-convergence: stop with the best point
            return finish("max-iter")
        if np.max(np.abs(st.x), initial=0) > BLOWUP or any(np.max(np.abs(y)) > BLOWUP for y in st.Y):
            return finish("infeasible-detected")
        if it == max_iter:
            break

        try:
            Sinv = [_inv(s, d) for s, d in zip(st.S, B.diag)]
        except LinAlgError:
            return finish("numerical-error")

        # Schur complement M_ij = F_i . (S^-1 F_j Y)
        M = np.zeros((m, m))
        G = []
        for F, Si, Y, d in zip(B.F, Sinv, st.Y, B.diag):
            if d:
                M += (F * (Si * Y)) @ F.T
            else:
                Gj = Si @ F @ Y  # (m, s, s)
                G.append(Gj)
                M += F.reshape(m, -1) @ np.transpose(Gj, (0, 2, 1)).reshape(m, -1).T
        M = (M + M.T) / 2
        M[np.diag_indices(m)] += 1e-14 * max(1.0, float(np.max(np.abs(np.diag(M)), initial=0)))
        try:
            chol = cho_factor(M)
        except LinAlgError:
            return finish("numerical-error")

        def direction(mu_t, corr):
            # F_i . dY = c_i - F_i . Y with dY = mu S^-1 - Y - S^-1 dS Y - S^-1 corr
            base = []
            for Si, d, k in zip(Sinv, B.diag, range(len(Sinv))):
                T = mu_t * Si
                if corr is not None:
                    T = T - (Si * corr[k] if d else Si @ corr[k])
                base.append(T)
            with_rp = [T - (Si * R * Y if d else Si @ R @ Y)
                       for T, Si, R, Y, d in zip(base, Sinv, Rp, st.Y, B.diag)]
            dx = cho_solve(chol, B.inner_each(with_rp) - B.c)
            dS = [r + f for r, f in zip(Rp, B.combo(dx))]
            dY = []
            for Si, s_, Y, T, d in zip(Sinv, dS, st.Y, base, B.diag):
                if d:
                    dY.append(T - Y - Si * s_ * Y)
                else:
                    D = T - Y - Si @ s_ @ Y
                    dY.append((D + D.T) / 2)
            if gram is not None:
                lam_ = cho_solve(gram, rd - B.inner_each(dY))
                dY = [dy + np.tensordot(lam_, F, axes=1) for dy, F in zip(dY, B.F)]
            return dx, dS, dY

        def steps(dS, dY):
            ap = min([_max_step(s, ds, d) for s, ds, d in zip(st.S, dS, B.diag)] + [np.inf])
            ad = min([_max_step(y, dy, d) for y, dy, d in zip(st.Y, dY, B.diag)] + [np.inf])
            return min(1.0, STEP * ap), min(1.0, STEP * ad)

        try:
            dx, dS, dY = direction(0.0, None)
            ap, ad = steps(dS, dY)
            mu_aff = sum(_dot(s + ap * ds, y + ad * dy)
                         for s, ds, y, dy in zip(st.S, dS, st.Y, dY)) / B.n_total
            sigma = min(SIGMA_MAX, max(SIGMA_MIN, (mu_aff / mu) ** 3))
            corr = [ds * dy if d else ds @ dy for ds, dy, d in zip(dS, dY, B.diag)]
            dx, dS, dY = direction(sigma * mu, corr)
            ap, ad = steps(dS, dY)
            # keep the complementarity gap from growing: shorten the step if it
            # would, and keep the full step if no shorter one helps
            full = (ap, ad)
            for _ in range(MU_BACKTRACK):
                mu_new = sum(_dot(s + ap * ds, y + ad * dy)
                             for s, ds, y, dy in zip(st.S, dS, st.Y, dY)) / B.n_total
                if mu_new <= MU_SLACK * mu:
                    break
                ap, ad = ap / 2, ad / 2
            else:
                ap, ad = full
        except LinAlgError:
            return finish("numerical-error")

        st.x = st.x + ap * dx
        st.S = [s + ap * ds for s, ds in zip(st.S, dS)]
        st.Y = [y + ad * dy for y, dy in zip(st.Y, dY)]
    return finish("max-iter")
