"""
Command-line entry point for qdslim.
Dispatches bound evaluation, Gibbs sweeps, verification campaigns, figure data
and capacity bounds; payloads go to stdout (or --output), status lines to stderr.
"""

import argparse
import dataclasses
import logging
import sys
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence

import numpy as np

from . import __version__
from .bounds import OmegaCase
from .bounds import OpenSystemParams
from .bounds import SpeedLimitCase
from .bounds import closed_schrodinger_bound
from .bounds import closed_vn_bound
from .bounds import constants
from .bounds import divergence_bounds
from .bounds import nonautonomous_bound
from .bounds import omega
from .bounds import optimal_c
from .bounds import pure_state_bound
from .bounds import pure_state_window
from .bounds import purity_bounds
from .bounds import purity_time
from .bounds import speed_limits
from .bounds import transferred_vn_bound
from .campaigns import CampaignConfig
from .campaigns import run_campaign
from .capacity import CAPACITY_SYMBOLS
from .capacity import CapacityBoundParams
from .capacity import CapacityKind
from .capacity import DiscreteEnsemble
from .capacity import capacity_continuity
from .capacity import holevo_quantity
from .capacity import optimal_t
from .capacity import pushforward
from .channels import ChannelFamily
from .channels import DensityMatrix
from .console import show_message
from .console import show_summary
from .entropy import ContinuityMode
from .errors import InvalidParameterError
from .errors import QdslimError
from .gibbs import asymptotics_check
from .gibbs import estimate_eta
from .gibbs import solve_beta
from .report import ReportWriter
from .spectra import resolve_spectrum

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def float_list(text: str) -> List[float]:
    """Parse a comma-separated list of floats."""
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}"
        ) from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None


def key_value(text: str) -> Any:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of {key} must be a number") from None


class QdslimCLI:
    """Main CLI application class."""

    def __init__(self):
        """Initialize the CLI and its argument parser."""
        self.parser = self._build_parser()
        self.writer = ReportWriter()

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="qdslim",
            description="Convergence bounds, speed limits and Gibbs-state asymptotics "
            "for quantum dynamical semigroups on finite truncations",
        )
        parser.add_argument("--version", action="version", version=f"qdslim {__version__}")
        parser.add_argument(
            "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs"
        )
        parser.add_argument("--output", help="write the report to this file instead of stdout")
        commands = parser.add_subparsers(dest="command", required=True)
        self._add_bounds(commands)
        self._add_gibbs(commands)
        self._add_verify(commands)
        self._add_figures(commands)
        self._add_capacity(commands)
        return parser

    def _add_bounds(self, commands: Any) -> None:
        bounds = commands.add_parser("bounds", help="evaluate an analytic bound")
        kinds = bounds.add_subparsers(dest="kind", required=True)

        closed = kinds.add_parser("closed", aliases=["vn"], help="closed-system bound 2 g E^a dt^a")
        self._alpha_e_dt(closed)

        nonautonomous = kinds.add_parser("nonautonomous", help="time-dependent perturbation")
        nonautonomous.add_argument("--alpha", type=float, required=True)
        nonautonomous.add_argument("--energy-norm", type=float, required=True)
        nonautonomous.add_argument("--dt", type=float, required=True)
        nonautonomous.add_argument("--potential-integral", type=float, default=0.0)

        pure = kinds.add_parser("pure", help="pure-state bound inside its window")
        self._alpha_e_dt(pure)

        open_system = kinds.add_parser("open", help="open-system rate omega")
        self._open_params(open_system)
        open_system.add_argument("--dt", type=float, default=1.0)

        transfer = kinds.add_parser("transfer", help="closed bound under an S-relative bound")
        self._alpha_e_dt(transfer)
        transfer.add_argument("--a", type=float, required=True)
        transfer.add_argument("--b", type=float, required=True)

        speed = kinds.add_parser("speedlimit", help="minimal time to reach an angle")
        speed.add_argument("--case", choices=[c.value for c in SpeedLimitCase], required=True)
        speed.add_argument("--alpha", type=float, required=True)
        speed.add_argument("--theta", type=float, required=True)
        speed.add_argument("--E", type=float, required=True)
        speed.add_argument("--a", type=float, default=0.0)
        speed.add_argument("--b", type=float, default=0.0)
        speed.add_argument("--c", type=float, default=None)
        speed.add_argument("--omega-case", choices=[c.value for c in OmegaCase], default="omega_H")

        purity = kinds.add_parser("purity", help="purity change bound and minimal time")
        self._open_params(purity)
        purity.add_argument("--dt", type=float, default=None)
        purity.add_argument("--p-start", type=float, default=None)
        purity.add_argument("--p-fin", type=float, default=None)

        divergences = kinds.add_parser("divergences", help="divergences implied by a trace bound")
        divergences.add_argument("--trace-bound", type=float, required=True)

    @staticmethod
    def _alpha_e_dt(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--alpha", type=float, required=True)
        parser.add_argument("--E", type=float, required=True)
        parser.add_argument("--dt", type=float, required=True)

    @staticmethod
    def _open_params(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--alpha", type=float, required=True)
        parser.add_argument("--a", type=float, default=0.0)
        parser.add_argument("--b", type=float, default=0.0)
        parser.add_argument("--c", type=float, default=None, help="default: the minimizing c")
        parser.add_argument("--E", type=float, required=True)
        parser.add_argument("--case", choices=[c.value for c in OmegaCase], default="omega_H")

    def _add_gibbs(self, commands: Any) -> None:
        gibbs = commands.add_parser("gibbs", help="Gibbs states and high-energy asymptotics")
        kinds = gibbs.add_subparsers(dest="kind", required=True)
        for name in ("beta", "entropy"):
            sub = kinds.add_parser(name, help=f"{name} of the Gibbs state at energies E")
            sub.add_argument("--spectrum", required=True)
            sub.add_argument("--E", type=float_list, required=True)
        eta = kinds.add_parser("eta", help="estimate eta from pair sums")
        eta.add_argument("--spectrum", required=True)
        eta.add_argument("--cutoff", type=float, required=True, help="largest pair-sum cutoff")
        eta.add_argument("--points", type=int, default=4)
        asymptotics = kinds.add_parser("asymptotics", help="beta E / eta and kappa on an E grid")
        asymptotics.add_argument("--spectrum", required=True)
        asymptotics.add_argument("--E-grid", dest="E_grid", type=float_list, required=True)
        asymptotics.add_argument("--eta", type=float, default=None)
        asymptotics.add_argument("--cutoff", type=float, default=4000.0)

    def _add_verify(self, commands: Any) -> None:
        verify = commands.add_parser("verify", help="run a bound certification campaign")
        verify.add_argument("campaign", help="attenuator, closed, entropy or preset:NAME")
        verify.add_argument("--seed", type=int, required=True)
        verify.add_argument("--dim", type=int, default=None)
        verify.add_argument("--alpha", type=float_list, default=None)
        verify.add_argument("--E", type=float_list, default=None)
        verify.add_argument("--samples", type=int, default=200)
        verify.add_argument("--ancilla", type=int, default=None)
        verify.add_argument("--t-grid", dest="t_grid", type=float_list, default=None)
        verify.add_argument("--epsilon", type=float, default=0.05)
        verify.add_argument("--param", type=key_value, action="append", default=[])

    def _add_figures(self, commands: Any) -> None:
        figures = commands.add_parser("figures", help="emit CSV data series for plotting")
        kinds = figures.add_subparsers(dest="kind", required=True)
        g_alpha = kinds.add_parser("g-alpha", help="prefactors zeta_alpha and g_alpha")
        g_alpha.add_argument("--points", type=int, default=400)
        compare = kinds.add_parser(
            "bound-compare", help="pure-state against density-operator bound"
        )
        compare.add_argument("--E", type=float, default=1.0)
        compare.add_argument("--alpha", type=float, default=0.5)
        compare.add_argument("--points", type=int, default=200)
        compare.add_argument("--t13-constant", dest="t13_constant", type=float, default=None)
        beta = kinds.add_parser("beta-asymptotics", help="beta(E) against eta/E")
        beta.add_argument("--spectrum", required=True)
        beta.add_argument(
            "--E-grid", dest="E_grid", type=float_list, default=[10.0, 100.0, 1000.0, 10000.0]
        )
        beta.add_argument("--eta", type=float, default=None)
        beta.add_argument("--cutoff", type=float, default=4000.0)

    def _add_capacity(self, commands: Any) -> None:
        capacity = commands.add_parser("capacity", help="capacity continuity bounds")
        kinds = capacity.add_subparsers(dest="kind", required=True)
        bound = kinds.add_parser("bound", help="continuity bound for a capacity or QMI")
        bound.add_argument("--which", choices=[k.value for k in CapacityKind], default="c_one")
        bound.add_argument("--E", type=float, required=True)
        bound.add_argument("--epsilon", type=float, required=True)
        bound.add_argument("--t", type=float, default=None, help="default: minimize over a grid")
        bound.add_argument("--eta", type=float, default=1.0)
        bound.add_argument("--k", type=float, default=1.0, help="output energy factor k(E)")
        bound.add_argument("--n", type=int, default=1)
        bound.add_argument("--spectrum", default=None, help="enables the exact_gibbs form")
        bound.add_argument(
            "--mode", choices=[m.value for m in ContinuityMode], default="asymptotic"
        )
        holevo = kinds.add_parser("holevo", help="Holevo quantity of a Fock-basis ensemble")
        holevo.add_argument("--dim", type=int, required=True)
        holevo.add_argument("--levels", type=int_list, required=True)
        holevo.add_argument("--weights", type=float_list, default=None)
        holevo.add_argument("--t", type=float, default=None, help="push through the attenuator")

    def cmd_bounds(self, args: argparse.Namespace) -> int:
        kind = "closed" if args.kind == "vn" else args.kind
        payload: Dict[str, Any]
        if kind == "closed":
            bound = closed_vn_bound(args.alpha, args.E, args.dt)
            payload = {
                "bound": bound,
                "vector_bound": closed_schrodinger_bound(args.alpha, args.E**args.alpha, args.dt),
                "divergences": divergence_bounds(bound)._asdict(),
            }
        elif kind == "nonautonomous":
            payload = {
                "bound": nonautonomous_bound(
                    args.alpha, args.energy_norm, args.dt, args.potential_integral
                )
            }
        elif kind == "pure":
            payload = {
                "bound": pure_state_bound(args.alpha, args.E, args.dt),
                "density_operator_bound": closed_vn_bound(args.alpha, args.E, args.dt),
                "window": pure_state_window(args.alpha, args.E),
            }
        elif kind == "open":
            params = self._open_system(args)
            rate = omega(params)
            payload = {
                "omega": rate,
                "c": optimal_c(params) if params.c is None else params.c,
                "bound": rate * args.dt**args.alpha,
                "divergences": divergence_bounds(rate * args.dt**args.alpha)._asdict(),
            }
        elif kind == "transfer":
            payload = {"bound": transferred_vn_bound(args.alpha, args.a, args.b, args.E, args.dt)}
        elif kind == "speedlimit":
            case = SpeedLimitCase(args.case)
            params = None
            if case is SpeedLimitCase.OPEN:
                params = OpenSystemParams(
                    args.alpha, args.a, args.b, args.E, OmegaCase(args.omega_case), args.c
                )
            payload = {"bound": speed_limits(args.alpha, args.E, args.theta, case, params)}
        elif kind == "purity":
            params = self._open_system(args)
            payload = {"omega": omega(params)}
            if args.dt is not None:
                payload["bound"] = purity_bounds(params, args.dt)
            if args.p_start is not None and args.p_fin is not None:
                payload["minimal_time"] = purity_time(params, args.p_start, args.p_fin)
        else:
            payload = divergence_bounds(args.trace_bound)._asdict()
        payload["params"] = {
            key: value for key, value in vars(args).items() if key not in ("output", "verbose")
        }
        return self._emit_json(payload)

    @staticmethod
    def _open_system(args: argparse.Namespace) -> OpenSystemParams:
        return OpenSystemParams(args.alpha, args.a, args.b, args.E, OmegaCase(args.case), args.c)

    def cmd_gibbs(self, args: argparse.Namespace) -> int:
        spectrum = resolve_spectrum(args.spectrum)
        if args.kind in ("beta", "entropy"):
            header = ["E", "beta", "log_Z", "entropy", "terms", "tail"]
            rows = []
            for energy in args.E:
                solution = solve_beta(spectrum, energy)
                rows.append(
                    [
                        solution.E,
                        solution.beta,
                        solution.log_z,
                        solution.entropy,
                        solution.truncation_terms,
                        solution.tail_bound,
                    ]
                )
            if args.kind == "entropy":
                return self._emit_csv(["E", "entropy", "beta"], [[r[0], r[3], r[1]] for r in rows])
            return self._emit_csv(header, rows)
        if args.kind == "eta":
            if args.points < 3:
                raise argparse.ArgumentTypeError("--points must be at least 3")
            cutoffs = [args.cutoff * k / args.points for k in range(1, args.points + 1)]
            report = estimate_eta(spectrum, cutoffs)
            return self._emit_json(
                dict(report.as_dict(), spectrum=spectrum.describe()),
                diagnostics={"diagnostic": report.diagnostic},
            )
        eta = args.eta if args.eta is not None else self._estimated_eta(spectrum, args.cutoff)
        table = asymptotics_check(spectrum, args.E_grid, eta)
        header = list(table.rows[0].keys())
        return self._emit_csv(header, [[row[key] for key in header] for row in table.rows])

    @staticmethod
    def _estimated_eta(spectrum: Any, cutoff: float) -> float:
        report = estimate_eta(spectrum, [cutoff * k / 4.0 for k in range(1, 5)])
        if report.eta is None:
            raise InvalidParameterError(f"cannot estimate eta: {report.diagnostic}; pass --eta")
        logger.info("estimated eta=%.6g for %s", report.eta, spectrum.name)
        return report.eta

    def cmd_verify(self, args: argparse.Namespace) -> int:
        defaults = {
            "attenuator": dict(dim=40, ancilla_dim=2),
            "closed": dict(dim=12, ancilla_dim=4, alphas=(0.5, 1.0), energies=(1.0,)),
            "entropy": dict(dim=40, ancilla_dim=1, alphas=(0.5,), energies=(2.0,)),
        }.get(args.campaign, dict(dim=12, ancilla_dim=2, alphas=(0.5, 1.0), energies=(2.0,)))
        overrides: Dict[str, Any] = {}
        if args.dim is not None:
            overrides["dim"] = args.dim
        if args.ancilla is not None:
            overrides["ancilla_dim"] = args.ancilla
        if args.alpha is not None:
            overrides["alphas"] = tuple(args.alpha)
        if args.E is not None:
            overrides["energies"] = tuple(args.E)
        if args.t_grid is not None:
            overrides["t_grid"] = tuple(args.t_grid)
        settings = CampaignConfig(
            seed=args.seed,
            samples=args.samples,
            params=dict(args.param),
            **{**defaults, **overrides},
        )
        options = {"epsilon": args.epsilon} if args.campaign == "entropy" else {}
        result = run_campaign(args.campaign, settings, **options)
        report = result.as_dict()
        code = self._emit_json(report, seed=args.seed, diagnostics=result.diagnostics)
        show_summary(report)
        if code != 0:
            return code
        return 0 if result.passed else 1

    def cmd_figures(self, args: argparse.Namespace) -> int:
        if args.kind == "g-alpha":
            rows = []
            for k in range(1, args.points + 1):
                alpha = k / args.points
                values = constants(alpha)
                rows.append([alpha, values.zeta, values.g])
            return self._emit_csv(["alpha", "zeta", "g"], rows)
        if args.kind == "bound-compare":
            window = pure_state_window(args.alpha, args.E)
            header = ["dt", "density_operator_bound", "pure_state_bound"]
            if args.t13_constant is not None:
                header.append("t13_bound")
            rows = []
            for dt in np.linspace(0.0, window, args.points):
                row = [
                    float(dt),
                    closed_vn_bound(args.alpha, args.E, float(dt)),
                    pure_state_bound(args.alpha, args.E, float(dt)),
                ]
                if args.t13_constant is not None:
                    row.append(args.t13_constant * float(dt) ** (1.0 / 3.0))
                rows.append(row)
            return self._emit_csv(header, rows)
        spectrum = resolve_spectrum(args.spectrum)
        eta = args.eta if args.eta is not None else self._estimated_eta(spectrum, args.cutoff)
        rows = []
        for energy in args.E_grid:
            solution = solve_beta(spectrum, energy)
            rows.append([energy, solution.beta, eta / energy, solution.beta * energy / eta])
        return self._emit_csv(["E", "beta", "eta_over_E", "beta_E_over_eta"], rows)

    def cmd_capacity(self, args: argparse.Namespace) -> int:
        if args.kind == "bound":
            which = CapacityKind(args.which)
            spectrum = resolve_spectrum(args.spectrum) if args.spectrum else None
            t = args.t if args.t is not None else 1.0 / (2.0 * args.epsilon)
            params = CapacityBoundParams(
                E=args.E,
                epsilon=args.epsilon,
                t=t,
                eta=args.eta,
                k_of_E=args.k,
                n=args.n,
                mode=ContinuityMode(args.mode),
                spectrum=spectrum,
            )
            if args.t is None:
                t, bound = optimal_t(params, which)
                params = dataclasses.replace(params, t=t)
            else:
                bound = capacity_continuity(params, which)
            payload = dict(bound.as_dict(), params=params.as_dict(), t_minimized=args.t is None)
            payload["symbol"] = CAPACITY_SYMBOLS.get(which.value, which.value)
            return self._emit_json(payload)

        weights = args.weights or [1.0 / len(args.levels)] * len(args.levels)
        states = [DensityMatrix.basis(args.dim, level) for level in args.levels]
        ensemble = DiscreteEnsemble(weights, states)
        payload = {"chi": holevo_quantity(ensemble), "levels": args.levels, "weights": weights}
        if args.t is not None:
            pushed = pushforward(ensemble, ChannelFamily.attenuator(args.dim), args.t)
            payload.update(t=args.t, chi_after_attenuator=holevo_quantity(pushed))
        return self._emit_json(payload)

    def _emit_json(
        self,
        payload: Dict[str, Any],
        seed: Optional[int] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
    ) -> int:
        success, message = self.writer.write_json(payload, seed, diagnostics)
        return self._finish(success, message)

    def _emit_csv(self, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> int:
        success, message = self.writer.write_csv(header, rows)
        return self._finish(success, message)

    def _finish(self, success: bool, message: str) -> int:
        if not success:
            show_message(message, "error")
            return 1
        if self.writer.output_path is not None:
            show_message(message, "success")
        return 0

    def run_with_args(self, args: Optional[List[str]] = None) -> int:
        """
        Parse arguments and run one command.
        Args:
            args: Command-line arguments
        Returns:
            Exit code: 0 pass, 1 computational failure, 2 usage error
        """
        try:
            namespace = self.parser.parse_args(args)
        except SystemExit as e:
            return int(e.code) if isinstance(e.code, int) else 2

        level = logging.WARNING
        if namespace.verbose == 1:
            level = logging.INFO
        elif namespace.verbose >= 2:
            level = logging.DEBUG
        logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
        self.writer = ReportWriter(namespace.output)

        handlers: Dict[str, Callable[[argparse.Namespace], int]] = {
            "bounds": self.cmd_bounds,
            "gibbs": self.cmd_gibbs,
            "verify": self.cmd_verify,
            "figures": self.cmd_figures,
            "capacity": self.cmd_capacity,
        }
        try:
            return handlers[namespace.command](namespace)
        except QdslimError as e:
            show_message(str(e), "error")
            return 1
        except argparse.ArgumentTypeError as e:
            show_message(str(e), "error")
            return 2


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the CLI.
    Args:
        argv: Command-line arguments
    Returns:
        Exit code
    """
    try:
        cli = QdslimCLI()
        return cli.run_with_args(argv)
    except KeyboardInterrupt:
        print("\n\nOperation cancelled by user", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"\n✗ Unexpected error: {e}", file=sys.stderr)
        return 1
