"""
Command-line front end: fidelity and G traces, figure presets, sweeps and a
self-verification report. All output is CSV with 12 significant digits.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import channel, oracle, teleport
from .channel import InitialChannel
from .decoherence import ReservoirParams, SolverConfig, SolverError, g_analytic, g_markovian, g_numeric
from .states import InvalidStateError, bell_overlaps, validate_density_matrix

QUANTITIES = (
    "g_abs",
    "g_re",
    "g_im",
    "avg_fidelity",
    "min_fidelity",
    "bell_probabilities",
    "avg_fidelity_closed",
    "min_fidelity_closed",
)
FIDELITY_QUANTITIES = ("avg_fidelity", "min_fidelity", "avg_fidelity_closed", "min_fidelity_closed")
ENGINES = ("analytic", "numeric")

MARKOV_T_MAX = 3.0
NON_MARKOV_T_MAX = 60.0
DEFAULT_SAMPLES = 600


@dataclass(frozen=True)
class Scenario:
    lam: float
    delta: float = 0.0
    initial: InitialChannel = field(default_factory=lambda: InitialChannel.bell(0))
    t_max: float = NON_MARKOV_T_MAX
    n_samples: int = DEFAULT_SAMPLES
    quantity: str = "avg_fidelity"
    engine: str = "analytic"
    solver_tol: float = 1e-10

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda: must be positive, got {self.lam}")
        if not np.isfinite(self.delta):
            raise ValueError("delta: must be finite")
        if not self.t_max > 0:
            raise ValueError(f"t_max: must be positive, got {self.t_max}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise ValueError(f"n_samples: must be an integer >= 2, got {self.n_samples}")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity: must be one of {QUANTITIES}, got {self.quantity!r}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine: must be one of {ENGINES}, got {self.engine!r}")
        if self.quantity.endswith("_closed") and self.initial.kind == "custom":
            raise ValueError("quantity: closed forms exist only for Bell-state initial channels")

    @property
    def params(self) -> ReservoirParams:
        return ReservoirParams(self.lam, self.delta)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, int(self.n_samples))


@dataclass(frozen=True)
class FigurePreset:
    id: int
    initial_m: int
    lam: float
    deltas: tuple[float, ...]
    quantity: str

    @property
    def t_max(self) -> float:
        return MARKOV_T_MAX if self.lam >= 1.0 else NON_MARKOV_T_MAX


FIGURE_PRESETS = {
    1: FigurePreset(1, 0, 5.0, (0.0, 5.0), "avg_fidelity"),
    2: FigurePreset(2, 0, 0.01, (0.0, 1.0, 2.0), "avg_fidelity"),
    3: FigurePreset(3, 1, 5.0, (0.0, 5.0), "avg_fidelity"),
    4: FigurePreset(4, 1, 0.01, (0.0, 1.0, 2.0), "avg_fidelity"),
    5: FigurePreset(5, 0, 0.01, (0.0, 1.0), "min_fidelity"),
    6: FigurePreset(6, 1, 0.01, (0.0, 1.0), "min_fidelity"),
}


def decoherence_samples(s: Scenario) -> np.ndarray:
    if s.engine == "numeric":
        cfg = SolverConfig(step=min(1e-3, s.t_max), tol=s.solver_tol, t_max=s.t_max)
        return g_numeric(s.params, cfg, times=s.times).g
    return g_analytic(s.params, s.times)


def run_scenario(s: Scenario) -> dict[str, np.ndarray]:
    """
    Evaluate one scenario on a uniform grid over [0, t_max].

    Returns ordered CSV columns: ``gamma0_t, value`` for G quantities,
    ``gamma0_t, value, m`` for fidelities and ``gamma0_t, p0..p3, m`` for
    Bell probabilities.

    Raises:
        SolverError: if the numeric engine fails.
    """
    t = s.times
    g = decoherence_samples(s)

    if s.quantity == "g_abs":
        return {"gamma0_t": t, "value": np.abs(g)}
    if s.quantity == "g_re":
        return {"gamma0_t": t, "value": g.real}
    if s.quantity == "g_im":
        return {"gamma0_t": t, "value": g.imag}

    if s.quantity.endswith("_closed"):
        phi_like = s.initial.kind == "phi"
        if s.quantity == "avg_fidelity_closed":
            fn = teleport.average_fidelity_closed_phi if phi_like else teleport.average_fidelity_closed_psi
        else:
            fn = teleport.minimal_fidelity_closed_phi if phi_like else teleport.minimal_fidelity_closed_psi
        vals = np.array([fn(gi) for gi in g])
        ms = np.full(t.shape, s.initial.m)
        return {"gamma0_t": t, "value": vals, "m": ms}

    values = np.empty((t.size, 4)) if s.quantity == "bell_probabilities" else np.empty(t.size)
    ms = np.empty(t.size, dtype=int)
    for i, gi in enumerate(g):
        rho = channel.evolve(s.initial, gi)
        probs = teleport.probabilities(rho)
        ms[i] = probs.m
        if s.quantity == "avg_fidelity":
            values[i] = teleport.average_fidelity(probs)
        elif s.quantity == "min_fidelity":
            ref = None if s.initial.kind == "custom" else s.initial.m
            values[i] = teleport.minimal_fidelity(rho, m=ref)
            if ref is not None:
                ms[i] = ref
        else:
            values[i] = probs.p

    if s.quantity == "bell_probabilities":
        cols = {"gamma0_t": t}
        cols.update({f"p{j}": values[:, j] for j in range(4)})
        cols["m"] = ms
        return cols
    teleport.FidelityTrace(t, values, ms)  # range / ordering check
    return {"gamma0_t": t, "value": values, "m": ms}


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def write_csv(path, columns: dict[str, np.ndarray]) -> Path:
    path = Path(path)
    names = list(columns)
    n = len(columns[names[0]])
    lines = [",".join(names)]
    for i in range(n):
        lines.append(",".join(_fmt(columns[c][i]) for c in names))
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def figure_scenarios(preset: FigurePreset, n_samples: int = DEFAULT_SAMPLES, engine: str = "analytic"):
    for delta in preset.deltas:
        yield delta, Scenario(
            lam=preset.lam,
            delta=delta,
            initial=InitialChannel.bell(preset.initial_m),
            t_max=preset.t_max,
            n_samples=n_samples,
            quantity=preset.quantity,
            engine=engine,
        )


def run_figure(fig_id: int, out_dir, n_samples: int = DEFAULT_SAMPLES, engine: str = "analytic") -> list[Path]:
    """Write one ``figN_<delta>.csv`` (header ``gamma0_t,value``) per curve."""
    if fig_id not in FIGURE_PRESETS:
        raise ValueError(f"id: figure id must be in 1..6, got {fig_id}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for delta, s in figure_scenarios(FIGURE_PRESETS[fig_id], n_samples, engine):
        cols = run_scenario(s)
        path = out_dir / f"fig{fig_id}_{delta:g}.csv"
        paths.append(write_csv(path, {"gamma0_t": cols["gamma0_t"], "value": cols["value"]}))
    return paths


def load_custom_state(path) -> np.ndarray:
    """
    Read 16 complex entries, row-major, as ``re,im`` pairs. Any mix of commas,
    whitespace and newlines separates the 32 numbers; ``#`` starts a comment.
    """
    text = Path(path).read_text()
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    tokens = [tok for tok in re.split(r"[,\s]+", text) if tok]
    if len(tokens) != 32:
        raise InvalidStateError(f"expected 32 numbers (16 re,im pairs), found {len(tokens)}")
    vals = np.array([float(tok) for tok in tokens])
    rho = (vals[0::2] + 1j * vals[1::2]).reshape(4, 4)
    return validate_density_matrix(rho)


def parse_initial(spec: str) -> InitialChannel:
    if spec == "phi":
        return InitialChannel.bell(0)
    if spec == "psi":
        return InitialChannel.bell(1)
    if spec.startswith("custom:"):
        return InitialChannel.custom(load_custom_state(spec[len("custom:"):]))
    raise ValueError(f"initial: expected phi, psi or custom:<file>, got {spec!r}")


def parse_range(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ValueError(f"range must look like a:b:n, got {text!r}") from None
    if n < 1:
        raise ValueError(f"range count must be >= 1, got {n}")
    return np.linspace(a, b, n)


# verification -------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    error: float
    bound: float
    passed: bool
    detail: str = ""
    informational: bool = False

    def line(self) -> str:
        tag = "INFO" if self.informational else ("PASS" if self.passed else "FAIL")
        msg = f"[{tag}] {self.name}: max error {self.error:.3e} (bound {self.bound:.1e})"
        return msg + (f" -- {self.detail}" if self.detail else "")


def _random_density_matrix(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    rank = rng.integers(1, dim + 1)
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _check(name, bound, fn, informational=False) -> CheckResult:
    try:
        err = float(fn())
    except (ValueError, SolverError) as exc:
        return CheckResult(name, float("nan"), bound, False, f"raised {type(exc).__name__}: {exc}", informational)
    return CheckResult(name, err, bound, bool(err < bound), "", informational)


def verify(tol: float = 1e-10, g_scale: float = 1.0, seed: int = 0, n_random: int = 200) -> list[CheckResult]:
    """
    Run the oracle cross-checks and return one result per check.

    ``g_scale`` multiplies every decoherence amplitude fed into the channel
    checks (fault injection).
    """
    rng = np.random.default_rng(seed)
    results = []
    regimes = [(5.0, 0.0), (5.0, 5.0), (0.01, 0.0), (0.01, 1.0), (0.01, 2.0)]
    t_grid = np.linspace(0.0, 30.0, 301)

    def numeric_vs_analytic():
        cfg = SolverConfig(tol=tol, t_max=30.0)
        return max(
            np.max(np.abs(g_numeric(ReservoirParams(l, d), cfg, t_grid).g - g_analytic(ReservoirParams(l, d), t_grid)))
            for l, d in regimes
        )

    results.append(_check("G numeric vs analytic", 10 * tol, numeric_vs_analytic))

    def markov():
        p = ReservoirParams(1000.0, 0.0)
        t = np.linspace(0.0, 5.0, 501)
        return np.max(np.abs(np.abs(g_analytic(p, t)) - g_markovian(p, t)))

    results.append(_check("Markovian limit", 2e-3, markov))

    def random_amplitude():
        lam, delta = regimes[rng.integers(len(regimes))]
        return g_scale * g_analytic(ReservoirParams(lam, delta), rng.uniform(0.0, 30.0))

    def cptp():
        worst = 0.0
        for _ in range(n_random):
            rho = channel.evolve(InitialChannel.custom(_random_density_matrix(rng)), random_amplitude())
            herm = np.max(np.abs(rho - rho.conj().T))
            trace = abs(np.trace(rho) - 1.0)
            if np.linalg.eigvalsh(rho)[0] < -1e-10:
                return float("inf")
            worst = max(worst, herm, trace)
        return worst

    results.append(_check("CPTP output", 1e-12, cptp))

    def kraus_vs_closed():
        worst = 0.0
        for _ in range(n_random):
            init = InitialChannel.custom(_random_density_matrix(rng))
            g = random_amplitude()
            full = channel.closed_form_elements(channel.evolve(init, g))
            closed = channel.evolve_closed_form(init, g)
            worst = max(worst, max(abs(full[k] - closed[k]) for k in closed))
        return worst

    results.append(_check("Kraus vs closed-form elements", 1e-12, kraus_vs_closed))

    def protocol():
        from .states import InputState

        worst = 0.0
        for _ in range(n_random):
            rho = _random_density_matrix(rng)
            psi = InputState(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            m = int(rng.integers(4))
            a = oracle.protocol_simulate(rho, psi, m)
            b = teleport.output_state(teleport.probabilities(rho, m), psi)
            worst = max(worst, np.max(np.abs(a - b)))
        return worst

    results.append(_check("protocol simulation vs depolarizing form", 1e-12, protocol))

    def quadrature():
        worst = 0.0
        for _ in range(50):
            rho = _random_density_matrix(rng)
            probs = teleport.probabilities(rho)
            quad = oracle.average_fidelity_quadrature(rho, probs.m)
            worst = max(worst, abs(quad - teleport.average_fidelity(probs)))
        return worst

    results.append(_check("quadrature average vs optimized fidelity", 1e-6, quadrature))

    def closed_average():
        worst = 0.0
        for lam in (5.0, 0.01):
            g = g_analytic(ReservoirParams(lam, 0.0), t_grid)
            for gi in g:
                worst = max(
                    worst,
                    abs(teleport.average_fidelity_optimized(channel.evolve(InitialChannel.bell(0), gi))
                        - teleport.average_fidelity_closed_phi(gi)),
                )
            for delta in (0.0, 1.0, 5.0):
                for gi in g_analytic(ReservoirParams(lam, delta), t_grid):
                    worst = max(
                        worst,
                        abs(teleport.average_fidelity_optimized(channel.evolve(InitialChannel.bell(1), gi))
                            - teleport.average_fidelity_closed_psi(gi)),
                    )
        return worst

    results.append(_check("closed-form average fidelities (phi at zero detuning, psi)", 1e-12, closed_average))

    def grid_vs_bruteforce():
        worst = 0.0
        for lam, delta in regimes:
            for gi in g_analytic(ReservoirParams(lam, delta), np.linspace(0.0, 30.0, 7)):
                for m0 in (0, 1):
                    rho = channel.evolve(InitialChannel.bell(m0), g_scale * gi)
                    probs = teleport.probabilities(rho)
                    grid = teleport.minimal_fidelity(rho, (181, 361))
                    brute = oracle.minimal_fidelity_bruteforce(rho, probs.m)
                    worst = max(worst, abs(grid - brute))
        return worst

    results.append(_check("grid minimal fidelity vs brute force", 1e-6, grid_vs_bruteforce))

    def eq12_detuned():
        worst = 0.0
        for lam, delta in regimes:
            if delta == 0.0:
                continue
            for gi in g_analytic(ReservoirParams(lam, delta), t_grid):
                pipe = teleport.average_fidelity_optimized(channel.evolve(InitialChannel.bell(0), gi))
                worst = max(worst, abs(pipe - teleport.average_fidelity_closed_phi(gi)))
        return worst

    results.append(_check("(2+|G|^4)/3 vs pipeline with detuning", 1e-12, eq12_detuned, informational=True))

    def phi_min_closed():
        worst = 0.0
        for lam, delta in regimes:
            for gi in g_analytic(ReservoirParams(lam, delta), np.linspace(0.0, 30.0, 61)):
                rho = channel.evolve(InitialChannel.bell(0), gi)
                worst = max(worst, abs(teleport.minimal_fidelity(rho, m=0) - teleport.minimal_fidelity_closed_phi(gi)))
        return worst

    results.append(_check("1/2 + Re[G^2]/2 vs grid minimal fidelity", 1e-3, phi_min_closed, informational=True))
    return results


# entry point --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nmteleport", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("--initial", default="phi", help="phi, psi or custom:<file>")
        p.add_argument("--quantity", default="avg_fidelity", choices=QUANTITIES)
        p.add_argument("--engine", default="analytic", choices=ENGINES)
        p.add_argument("--t-max", type=float, default=None, help="final gamma0*t (default 3 if lambda >= 1 else 60)")
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        p.add_argument("--tol", type=float, default=1e-10, help="numeric engine tolerance")

    p = sub.add_parser("trace", help="write one trace as CSV")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    scenario_args(p)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")

    p = sub.add_parser("figure", help="write the CSV curves of a figure preset")
    p.add_argument("--id", type=int, required=True, choices=sorted(FIGURE_PRESETS))
    p.add_argument("--out-dir", default=".")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--engine", default="analytic", choices=ENGINES)

    p = sub.add_parser("verify", help="run the oracle cross-checks")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--g-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", help="one trace per (lambda, delta) pair")
    p.add_argument("--lambda-range", required=True, help="a:b:n")
    p.add_argument("--delta-range", default="0:0:1", help="a:b:n")
    scenario_args(p)
    p.add_argument("--out-dir", default=".")
    return parser


def _default_t_max(lam: float) -> float:
    return MARKOV_T_MAX if lam >= 1.0 else NON_MARKOV_T_MAX


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "trace":
            s = Scenario(
                lam=args.lam,
                delta=args.delta,
                initial=parse_initial(args.initial),
                t_max=args.t_max if args.t_max is not None else _default_t_max(args.lam),
                n_samples=args.samples,
                quantity=args.quantity,
                engine=args.engine,
                solver_tol=args.tol,
            )
            cols = run_scenario(s)
            if args.out == "-":
                names = list(cols)
                sys.stdout.write(",".join(names) + "\n")
                for i in range(len(cols["gamma0_t"])):
                    sys.stdout.write(",".join(_fmt(cols[c][i]) for c in names) + "\n")
            else:
                write_csv(args.out, cols)
        elif args.command == "figure":
            for path in run_figure(args.id, args.out_dir, args.samples, args.engine):
                print(path)
        elif args.command == "verify":
            if not args.tol > 0:
                raise ValueError("tol: must be positive")
            results = verify(tol=args.tol, g_scale=args.g_scale, seed=args.seed)
            for r in results:
                print(r.line())
            gating = [r for r in results if not r.informational]
            failed = [r for r in gating if not r.passed]
            print(f"{len(gating) - len(failed)}/{len(gating)} checks passed")
            return 1 if failed else 0
        elif args.command == "sweep":
            out_dir = Path(args.out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            initial = parse_initial(args.initial)
            for lam in parse_range(args.lambda_range):
                for delta in parse_range(args.delta_range):
                    s = Scenario(
                        lam=float(lam),
                        delta=float(delta),
                        initial=initial,
                        t_max=args.t_max if args.t_max is not None else _default_t_max(lam),
                        n_samples=args.samples,
                        quantity=args.quantity,
                        engine=args.engine,
                        solver_tol=args.tol,
                    )
                    print(write_csv(out_dir / f"sweep_lambda{lam:g}_delta{delta:g}.csv", run_scenario(s)))
    except SolverError as exc:
        print(f"nmteleport: solver failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, InvalidStateError, OSError) as exc:
        parser.error(str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
