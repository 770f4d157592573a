"""
Continuação numérica de uma solução em série a partir de t0 > 0
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from config.settings import INTEGRATION_CONFIG
from src.cohom1 import ricci_cc_numeric, shape_numeric
from src.equations import EinsteinTarget, Reparametrized, SolitonTarget, TensorTarget
from src.exceptions import PositivityLost, StepFailure
from src.homogeneous import ricci_gh_numeric
from src.ivp import IVPSolution


@dataclass
class ODEState:
    """
    Estado da EDO: valores e derivadas das entradas do ansatz, mais v (sóliton)
    e h (gauge reparametrizado)
    """
    t: float
    values: np.ndarray
    derivatives: np.ndarray
    v: Optional[float] = None
    h: Optional[float] = None

    def to_vector(self) -> np.ndarray:
        extra = [x for x in (self.v, self.h) if x is not None]
        return np.concatenate([self.values, self.derivatives, np.array(extra, dtype=float)])

    @classmethod
    def from_vector(cls, t: float, y: np.ndarray, size: int, soliton: bool,
                    reparametrized: bool) -> 'ODEState':
        position = 2 * size
        v = h = None
        if soliton:
            v = float(y[position])
            position += 1
        if reparametrized:
            h = float(y[position])
        return cls(t, np.array(y[:size]), np.array(y[size:2 * size]), v, h)

    @classmethod
    def from_solution(cls, sol: IVPSolution, t0: float) -> 'ODEState':
        """Avalia a série resolvida (e suas derivadas) em t0"""
        model = sol.model()
        entries = [item.entry for item in sol.problem.sd.ansatz]
        values, derivatives = [], []
        for i, j in entries:
            value, first, _ = model.metric.entry(i, j).evaluate_derivatives(t0)
            values.append(value)
            derivatives.append(first)
        v = model.v.evaluate(t0) if model.v is not None else None
        h = model.h.evaluate(t0) if model.h is not None else None
        return cls(t0, np.array(values), np.array(derivatives), v, h)


@dataclass
class Trajectory:
    """Amostras t, entradas do ansatz e, se houver, v e h"""
    labels: List[str]
    t: np.ndarray
    values: np.ndarray  # (amostras, entradas)
    derivatives: np.ndarray
    v: Optional[np.ndarray] = None
    h: Optional[np.ndarray] = None

    def column(self, label: str) -> np.ndarray:
        return self.values[:, self.labels.index(label)]

    def state_at(self, index: int) -> ODEState:
        return ODEState(float(self.t[index]), self.values[index].copy(),
                        self.derivatives[index].copy(),
                        None if self.v is None else float(self.v[index]),
                        None if self.h is None else float(self.h[index]))

    def header(self) -> List[str]:
        header = ['t'] + self.labels
        if self.v is not None:
            header.append('v')
        if self.h is not None:
            header.append('h')
        return header

    def rows(self) -> List[List[float]]:
        rows = []
        for k, t in enumerate(self.t):
            row = [float(t)] + [float(x) for x in self.values[k]]
            if self.v is not None:
                row.append(float(self.v[k]))
            if self.h is not None:
                row.append(float(self.h[k]))
            rows.append(row)
        return rows


class MetricFlow:
    """Lado direito da EDO de segunda ordem reescrita em primeira ordem"""

    def __init__(self, sol: IVPSolution):
        problem = sol.problem
        self.data = problem.data
        self.target = problem.target
        self.gauge = problem.gauge
        self.entries: List[Tuple[int, int]] = [item.entry for item in problem.sd.ansatz]
        self.size = len(self.entries)
        self.dim = problem.data.dim_n
        self.soliton = isinstance(self.target, SolitonTarget)
        self.reparametrized = isinstance(self.gauge, Reparametrized)
        self.labels = [self._label(i, j) for i, j in self.entries]

    def _label(self, i: int, j: int) -> str:
        labels = self.data.labels
        return f"g_{labels[self.data.n_indices[i]]}{labels[self.data.n_indices[j]]}"

    def assemble(self, flat: np.ndarray) -> np.ndarray:
        P = np.zeros((self.dim, self.dim))
        for (i, j), value in zip(self.entries, flat):
            P[i, j] = P[j, i] = value
        return P

    def _target(self, t: float, P: np.ndarray, P1: np.ndarray):
        """T, Ṫ, T̈ e β, β̇, β̈ em t"""
        if isinstance(self.target, TensorTarget):
            T = np.zeros((3, self.dim, self.dim))
            for (i, j), series in self.target.entries.entries.items():
                T[:, i, j] = series.evaluate_derivatives(t)
            beta = self.target.beta.evaluate_derivatives(t) if self.target.beta is not None \
                else [0.0, 0.0, 0.0]
            return T[0], T[1], T[2], beta
        lam = float(self.target.lam)
        return lam * P, lam * P1, None, [lam, 0.0, 0.0]

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        state = ODEState.from_vector(t, y, self.size, self.soliton, self.reparametrized)
        P = self.assemble(state.values)
        P1 = self.assemble(state.derivatives)
        first_order, S = shape_numeric(P, P1)
        ricci = ricci_gh_numeric(self.data, P)
        T, T1, T2, beta = self._target(t, P, P1)
        extra = []

        if self.reparametrized:
            h = state.h
            P2 = 2 * first_order + 2 * h * h * (ricci - T)
            h_log = self._lapse_log_derivative(P, P1, P2, S, T1, T2, beta)
            P2 = P2 + h_log * P1
            extra = [h_log * h]
        else:
            forcing = ricci + first_order - T
            if self.soliton:
                forcing = forcing + 0.5 * state.v * P1
            P2 = 2 * forcing
            if self.soliton:
                v1 = float(self.target.lam) + float(self.target.inv_m) * state.v ** 2 \
                    - ricci_cc_numeric(P, P1, P2)
                extra = [v1]

        second = np.array([P2[i, j] for i, j in self.entries])
        return np.concatenate([state.derivatives, second, np.array(extra, dtype=float)])

    def _lapse_log_derivative(self, P, P1, P2_frozen, S, T1, T2, beta) -> float:
        """
        ḣ/h a partir da derivada da identidade de Bianchi na direção normal

        P2_frozen é P̈ calculado com ḣ = 0; alvos de Einstein e β = 0 dão ḣ = 0.
        """
        value, first, second = beta
        if isinstance(self.target, EinsteinTarget) or value == 0:
            return 0.0
        P_inv = np.linalg.inv(P)
        tau = np.trace(S)
        numerator = second + first * tau + value * (np.trace(P_inv @ P2_frozen) - np.trace(S @ S)) \
            + np.trace(P_inv @ P1 @ P_inv @ T1) - np.trace(P_inv @ T2)
        return float(-numerator / (value * tau))

    def positivity(self, t: float, y: np.ndarray) -> float:
        P = self.assemble(y[:self.size])
        return float(np.linalg.eigvalsh(P).min()) - INTEGRATION_CONFIG['positivity_floor']

    positivity.terminal = True
    positivity.direction = -1


def continue_solution(sol: IVPSolution, t0: Optional[float] = None, t_max: Optional[float] = None,
                      reltol: Optional[float] = None, samples: Optional[int] = None,
                      start: Optional[ODEState] = None) -> Trajectory:
    """
    Integra numericamente a partir da série avaliada em t0

    Args:
        sol: solução em série (certificada)
        t0: ponto de partida (padrão INTEGRATION_CONFIG['t0'])
        t_max: ponto final
        reltol: tolerância relativa do controle de passo
        samples: número de amostras igualmente espaçadas em [t0, t_max]
        start: estado inicial explícito (reinício a partir de uma trajetória)

    Returns:
        Trajectory amostrada

    Raises:
        StepFailure: o integrador não atingiu a tolerância
        PositivityLost: P deixou de ser positiva definida
    """
    config = INTEGRATION_CONFIG
    t0 = start.t if start is not None else (config['t0'] if t0 is None else t0)
    t_max = config['t_max'] if t_max is None else t_max
    reltol = config['reltol'] if reltol is None else reltol
    samples = config['samples'] if samples is None else samples
    if t_max <= t0:
        raise StepFailure(t0, f"t_max = {t_max} deve ser maior que t0")

    flow = MetricFlow(sol)
    state = start if start is not None else ODEState.from_solution(sol, t0)
    if np.linalg.eigvalsh(flow.assemble(state.values)).min() <= config['positivity_floor']:
        raise PositivityLost(t0, float(np.linalg.eigvalsh(flow.assemble(state.values)).min()))

    t_eval = np.linspace(t0, t_max, samples)
    with np.errstate(divide='raise', invalid='raise', over='raise'):
        try:
            result = solve_ivp(flow, (t0, t_max), state.to_vector(), method=config['method'],
                               t_eval=t_eval, rtol=reltol, atol=config['abstol'],
                               events=[flow.positivity])
        except (FloatingPointError, np.linalg.LinAlgError) as e:
            raise StepFailure(t0, str(e))

    if result.status == -1:
        raise StepFailure(float(result.t[-1]) if len(result.t) else t0, result.message)
    if result.status == 1 and len(result.t_events[0]):
        t_fail = float(result.t_events[0][0])
        y_fail = result.y_events[0][0]
        raise PositivityLost(t_fail, float(np.linalg.eigvalsh(flow.assemble(y_fail[:flow.size])).min()))

    size = flow.size
    y = result.y.T
    position = 2 * size
    v = h = None
    if flow.soliton:
        v = y[:, position]
        position += 1
    if flow.reparametrized:
        h = y[:, position]
    return Trajectory(flow.labels, result.t, y[:, :size], y[:, size:2 * size], v, h)
