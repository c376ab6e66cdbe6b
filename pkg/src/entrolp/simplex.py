"""Reference LP engine: two-phase revised primal simplex on the standard
equality form

    min c.x   subject to   A x = b,  x >= 0.

Pricing is devex, with Bland's lowest-index rule as the anti-cycling
fallback after a long run of degenerate pivots; a deterministic rhs jitter
keeps basic solutions nondegenerate in the first place, and the finished
basis is re-evaluated against the exact rhs.  The basis inverse is kept
explicitly and refreshed from scratch at a fixed cadence.  Everything is
plain numpy and fully deterministic: solving the same system twice returns
bit-identical vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_TOL = 1e-9
DEGENERATE_STREAK = 1000
REFACTOR_EVERY = 128

# deterministic right-hand-side perturbation: breaks the degenerate pivot
# fans these LPs produce; the clean basis is re-evaluated on the exact rhs
_PERTURB_SEED = 0x5EED
_PERTURB_SCALE = 1e-6


class CscMatrix:
    """Column-compressed sparse matrix with just the operations the simplex
    needs: dense column extraction and left multiplication by a row vector."""

    __slots__ = ("nrows", "ncols", "colptr", "rowidx", "vals", "_colidx")

    def __init__(self, nrows, ncols, colptr, rowidx, vals):
        self.nrows = nrows
        self.ncols = ncols
        self.colptr = colptr
        self.rowidx = rowidx
        self.vals = vals
        self._colidx = np.repeat(
            np.arange(ncols, dtype=np.int64), np.diff(colptr)
        )

    @classmethod
    def from_columns(cls, nrows, columns):
        """columns: iterable of (row_indices, values) pairs."""
        colptr = [0]
        rows, vals = [], []
        for ridx, v in columns:
            rows.append(np.asarray(ridx, dtype=np.int64))
            vals.append(np.asarray(v, dtype=np.float64))
            colptr.append(colptr[-1] + len(ridx))
        return cls(
            nrows=nrows,
            ncols=len(colptr) - 1,
            colptr=np.asarray(colptr, dtype=np.int64),
            rowidx=(np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)),
            vals=(np.concatenate(vals) if vals else np.zeros(0)),
        )

    def col(self, j, out=None):
        if out is None:
            out = np.zeros(self.nrows)
        else:
            out[:] = 0.0
        sl = slice(self.colptr[j], self.colptr[j + 1])
        out[self.rowidx[sl]] = self.vals[sl]
        return out

    def t_dot(self, y):
        """A^T y for a dense y."""
        if self.vals.size == 0:
            return np.zeros(self.ncols)
        return np.bincount(self._colidx, weights=self.vals * y[self.rowidx],
                           minlength=self.ncols)

    def scale_rows(self, row_scale):
        self.vals = self.vals * row_scale[self.rowidx]

    def dense_submatrix(self, cols):
        out = np.zeros((self.nrows, len(cols)))
        for k, j in enumerate(cols):
            sl = slice(self.colptr[j], self.colptr[j + 1])
            out[self.rowidx[sl], k] = self.vals[sl]
        return out


@dataclass
class StandardResult:
    status: str  # optimal | infeasible | unbounded
    x: np.ndarray | None
    y: np.ndarray | None  # duals of the equality rows, original row signs
    objective: float | None
    iterations: int
    log: list


class _Core:
    """Shared state for one solve.  Never mutates the caller's matrix."""

    def __init__(self, A, b, c_real, display):
        self.m = A.nrows
        self.n_real = A.ncols
        self.display = display
        self.log = []
        self.iterations = 0
        # normalize rhs signs once; remember them to un-flip duals at the end
        self.row_sign = np.where(b < 0, -1.0, 1.0)
        self.b = b * self.row_sign
        # artificial identity block appended after the real columns
        art_rowidx = np.arange(self.m, dtype=np.int64)
        self.A = CscMatrix(
            nrows=self.m,
            ncols=self.n_real + self.m,
            colptr=np.concatenate([
                A.colptr,
                A.colptr[-1] + 1 + np.arange(self.m, dtype=np.int64),
            ]),
            rowidx=np.concatenate([A.rowidx, art_rowidx]),
            vals=np.concatenate([A.vals * self.row_sign[A.rowidx], np.ones(self.m)]),
        )
        self.c_real = c_real

    def initial_basis(self, identity_hint):
        """Start from hinted identity columns where valid, artificials
        elsewhere.  A hint column is valid for its row when it has a single
        +1 entry in that row after sign normalization."""
        basis = np.arange(self.n_real, self.n_real + self.m, dtype=np.int64)
        if identity_hint is not None:
            for r, j in enumerate(identity_hint):
                if j is None:
                    continue
                sl = slice(self.A.colptr[j], self.A.colptr[j + 1])
                if (
                    self.A.colptr[j + 1] - self.A.colptr[j] == 1
                    and self.A.rowidx[sl][0] == r
                    and abs(self.A.vals[sl][0] - 1.0) < 1e-15
                ):
                    basis[r] = j
        return basis

    def refactor(self, basis):
        B = self.A.dense_submatrix(basis.tolist())
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"singular basis during refactorization: {exc}") from None
        xB = Binv @ self.b
        return Binv, xB

    def _emit(self, phase, obj):
        if self.display and (self.iterations % 100 == 0):
            self.log.append(f"phase {phase}  iter {self.iterations:6d}  objective {obj: .9e}")

    def run(self, basis, Binv, xB, costs, banned, phase):
        """Iterate to optimality of `costs`; mutates basis/Binv/xB in place.
        Returns 'optimal' or 'unbounded'.

        Pricing is devex (reference weights approximating steepest edge),
        which keeps the iteration count sane on the heavily degenerate
        systems this toolbox produces; a run of degenerate pivots switches
        to Bland's lowest-index rule until progress resumes.
        """
        m = self.m
        bland = False
        streak = 0
        since_refactor = 0
        d = np.zeros(m)
        weights = np.ones(self.A.ncols)
        max_iter = 200000 + 20 * self.A.ncols
        while True:
            if self.iterations >= max_iter:
                raise SolverError("simplex iteration limit exceeded")
            cB = costs[basis]
            y = cB @ Binv
            r = costs - self.A.t_dot(y)
            r[basis] = 0.0
            if banned is not None:
                r[banned] = np.inf
            improving = r < -OPT_TOL
            if not improving.any():
                return "optimal"
            if bland:
                j = int(np.flatnonzero(improving)[0])
            else:
                score = np.where(improving, r * r / weights, -np.inf)
                j = int(np.argmax(score))
            self.A.col(j, out=d)
            d = Binv @ d
            pos = d > PIVOT_TOL
            if not pos.any():
                return "unbounded"
            ratios = np.full(m, np.inf)
            ratios[pos] = xB[pos] / d[pos]
            theta = ratios.min()
            cand = np.flatnonzero(ratios <= theta + FEAS_TOL * (1.0 + abs(theta)))
            if bland:
                rsel = int(cand[np.argmin(basis[cand])])
            else:
                rsel = int(cand[np.argmax(d[cand])])  # stable pivots on ties
            piv = d[rsel]
            # devex weight propagation along the pivot row (pre-pivot state)
            alpha_row = self.A.t_dot(Binv[rsel]) / piv
            wj = weights[j]
            np.maximum(weights, alpha_row * alpha_row * wj, out=weights)
            weights[basis[rsel]] = max(wj / (piv * piv), 1.0)
            if weights.max() > 1e12:
                weights[:] = 1.0
            # pivot
            xB -= theta * d
            xB[rsel] = theta
            np.maximum(xB, 0.0, out=xB)
            basis[rsel] = j
            Binv[rsel] /= piv
            factor = d.copy()
            factor[rsel] = 0.0
            Binv -= np.outer(factor, Binv[rsel])
            self.iterations += 1
            since_refactor += 1
            if since_refactor >= REFACTOR_EVERY:
                Binv[:, :], xB[:] = self.refactor(basis)
                np.maximum(xB, 0.0, out=xB)
                since_refactor = 0
            if theta <= FEAS_TOL:
                streak += 1
                if streak > DEGENERATE_STREAK:
                    bland = True
            else:
                streak = 0
                bland = False
            self._emit(phase, float(costs[basis] @ xB))


def solve_standard(A, b, c, *, identity_hint=None, display=False,
                   feasibility_only=False, perturb=True):
    """Solve min c.x s.t. Ax = b, x >= 0 for a CscMatrix A.

    identity_hint: optional per-row column index usable as a starting basis
    column (e.g. slack columns); rows without a usable hint start on an
    artificial variable.

    With ``perturb`` the rhs is jittered deterministically to keep basic
    solutions nondegenerate, and the finished basis is re-evaluated against
    the exact rhs; any outcome the jitter could have distorted (declared
    infeasibility, unboundedness, or a basis that stops being feasible on
    restore) falls back to one exact, unperturbed solve.
    """
    if feasibility_only:
        perturb = False  # feasibility must be decided on the exact rhs
    result = _solve_once(A, b, c, identity_hint, display, feasibility_only,
                         perturb)
    if result is None:
        result = _solve_once(A, b, c, identity_hint, display, feasibility_only,
                             False)
        if result is None:
            raise SolverError("unperturbed solve lost feasibility on restore")
    return result


def _solve_once(A, b, c, identity_hint, display, feasibility_only, perturb):
    """One two-phase run; returns None when a perturbed run must be redone
    exactly."""
    core = _Core(A, np.asarray(b, dtype=np.float64).copy(),
                 np.asarray(c, dtype=np.float64), display)
    m, n_real = core.m, core.n_real
    b_exact = core.b.copy()
    if perturb and m > 0:
        rng = np.random.default_rng(_PERTURB_SEED)
        core.b = core.b + _PERTURB_SCALE * (0.5 + rng.random(m)) * (1.0 + np.abs(core.b))
    basis = core.initial_basis(identity_hint)
    Binv, xB = core.refactor(basis)
    np.maximum(xB, 0.0, out=xB)

    art_mask = np.zeros(core.A.ncols, dtype=bool)
    art_mask[n_real:] = True

    if (basis >= n_real).any():
        costs1 = np.zeros(core.A.ncols)
        costs1[n_real:] = 1.0
        status = core.run(basis, Binv, xB, costs1, None, phase=1)
        if status != "optimal":
            raise SolverError("phase-1 subproblem reported unbounded")
        infeas = float(costs1[basis] @ xB)
        if infeas > 1e-7:
            if perturb:
                return None  # the jitter may be what broke feasibility
            return StandardResult("infeasible", None, None, None,
                                  core.iterations, core.log)
        _drive_out_artificials(core, basis, Binv, xB)
    if feasibility_only:
        return StandardResult("optimal", None, None, 0.0, core.iterations, core.log)

    costs2 = np.zeros(core.A.ncols)
    costs2[:n_real] = core.c_real
    status = core.run(basis, Binv, xB, costs2, art_mask, phase=2)
    if status == "unbounded":
        if perturb:
            return None  # certify unboundedness against the exact rhs
        return StandardResult("unbounded", None, None, None,
                              core.iterations, core.log)
    # evaluate the final basis on the exact rhs
    core.b = b_exact
    Binv, xB = core.refactor(basis)
    if float(xB.min(initial=0.0)) < -1e-7:
        return None
    np.maximum(xB, 0.0, out=xB)
    x = np.zeros(n_real)
    real_basic = basis < n_real
    x[basis[real_basic]] = xB[real_basic]
    if (~real_basic).any() and float(xB[~real_basic].max(initial=0.0)) > 1e-7:
        if perturb:
            return None
        raise SolverError("artificial variable stayed positive after phase 2")
    y = (costs2[basis] @ Binv) * core.row_sign
    obj = float(core.c_real @ x)
    if display:
        core.log.append(f"optimal  objective {obj:.9e}  iterations {core.iterations}")
    return StandardResult("optimal", x, y, obj, core.iterations, core.log)


def _drive_out_artificials(core, basis, Binv, xB):
    """Pivot basic artificials onto real columns where possible; rows whose
    artificial cannot be replaced are redundant and keep it at zero."""
    n_real = core.n_real
    in_basis = set(basis.tolist())
    for r in range(core.m):
        if basis[r] < n_real:
            continue
        alpha = core.A.t_dot(Binv[r])
        alpha[n_real:] = 0.0
        for j in in_basis:
            alpha[j] = 0.0
        cands = np.flatnonzero(np.abs(alpha) > 1e-7)
        if cands.size == 0:
            continue
        j = int(cands[0])
        d = Binv @ core.A.col(j)
        piv = d[r]
        Binv[r] /= piv
        factor = d.copy()
        factor[r] = 0.0
        Binv -= np.outer(factor, Binv[r])
        theta = xB[r] / piv
        xB -= theta * factor
        xB[r] = theta
        in_basis.discard(int(basis[r]))
        in_basis.add(j)
        basis[r] = j
        np.maximum(xB, 0.0, out=xB)
