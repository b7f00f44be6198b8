"""
Management command exposing the hyperlab checks.

Subcommands evaluate series, run verification suites, build monodromy
matrices, replay the omega^2 specialization, integrate periods, sample the
Schwarz disc and classify covers.

Exit codes: 0 when every requested check passes, 1 on a failed check,
2 on usage or domain errors.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from django_hyperlab import covers, eisenstein, monodromy, periods
from django_hyperlab.exceptions import HyperlabError
from django_hyperlab.hyperseries import SeriesOptions, evaluate
from django_hyperlab.params import ParamSet
from django_hyperlab.reports import build_document, dumps, format_text, suite_document
from django_hyperlab.settings import hyperlab_settings
from django_hyperlab.utils import format_complex, format_matrix, parse_complex, parse_param

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
CHECK_FAILED = 1

# (series id, parameter flags, coordinate flags)
EVAL_SIGNATURES = {
    "f": ("F", ("a", "b", "c"), ("x",)),
    "f1": ("F1", ("a", "b", "bp", "c"), ("x", "y")),
    "f2": ("F2", ("a", "b", "bp", "c", "cp"), ("x", "y")),
    "fd3": ("FD3", ("a", "b1", "b2", "b3", "c"), ("y1", "y2", "y3")),
    "fx3": ("FX3", ("a2", "a3", "a4", "a5", "a6"), ("x1", "x3", "x4")),
}

PARAM_FLAGS = ("a", "b", "bp", "c", "cp", "b1", "b2", "b3", "a2", "a3", "a4", "a5", "a6")
COORD_FLAGS = ("x", "y", "y1", "y2", "y3", "x1", "x3", "x4")

PAIRING_TOL = 1e-10


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _entry_text(value: Any) -> str:
    if isinstance(value, (complex, float, np.complexfloating)):
        return format_complex(complex(value), digits=8)
    return str(value)


class Command(BaseCommand):
    """
    Run hyperlab evaluations and verification suites.

    Examples:
        python manage.py hyperlab covers --max-n 60
        python manage.py hyperlab verify all --seed 7 --format json
    """

    help = "Evaluate series and certify the identities of the reducible Appell E2 system"
    requires_system_checks: List[str] = []

    def add_arguments(self, parser):
        """Add command arguments."""
        subparsers = parser.add_subparsers(dest="subcommand", required=True)

        evaluate_parser = subparsers.add_parser("eval", help="Evaluate one series")
        evaluate_parser.add_argument("series", choices=sorted(EVAL_SIGNATURES))
        for name in PARAM_FLAGS + COORD_FLAGS:
            evaluate_parser.add_argument(_flag(name), dest=name, type=str)
        evaluate_parser.add_argument("--tol", type=float, help="Term-magnitude stop threshold")
        evaluate_parser.add_argument("--max-terms", type=int, help="Maximum total degree")
        self._add_format(evaluate_parser)

        verify_parser = subparsers.add_parser("verify", help="Run verification suites")
        verify_parser.add_argument("suite", help="Suite name or 'all'")
        verify_parser.add_argument("--seed", type=int, help="PRNG seed (default HYPERLAB_SEED)")
        verify_parser.add_argument("--tol", type=float, help="Tolerance for identity sweeps")
        verify_parser.add_argument("--jobs", type=int, help="Worker cap for grid evaluation")
        verify_parser.add_argument("--draws", type=int, help="Random mu draws per monodromy suite")
        verify_parser.add_argument("--output", type=str, help="Write the report to this path")
        self._add_format(verify_parser)

        monodromy_parser = subparsers.add_parser("monodromy", help="Build H and circuit matrices")
        for name in ("a", "b", "bp", "c", "cp"):
            monodromy_parser.add_argument(_flag(name), dest=name, type=str)
        monodromy_parser.add_argument("--random", action="store_true", help="Draw a random mu")
        monodromy_parser.add_argument("--seed", type=int)
        monodromy_parser.add_argument(
            "--exact", action="store_true", help="Exact arithmetic (exponents in (1/6)Z)"
        )
        monodromy_parser.add_argument(
            "--variant", choices=("structured", "explicit"), default="structured"
        )
        self._add_format(monodromy_parser)

        special_parser = subparsers.add_parser("special", help="Matrices at mu = omega^2")
        self._add_format(special_parser)

        periods_parser = subparsers.add_parser("periods", help="Abel-Jacobi integral phi_k(s,t)")
        periods_parser.add_argument("--k", type=int, choices=(1, 2), required=True)
        periods_parser.add_argument("--s", type=str, required=True)
        periods_parser.add_argument("--t", type=str, required=True)
        periods_parser.add_argument("--nodes", type=int)
        self._add_format(periods_parser)

        schwarz_parser = subparsers.add_parser("schwarz", help="Sample the Schwarz disc image")
        schwarz_parser.add_argument("--t-min", type=float, required=True)
        schwarz_parser.add_argument("--t-max", type=float, required=True)
        schwarz_parser.add_argument("--count", type=int, required=True)
        schwarz_parser.add_argument("--imag", type=float, default=0.0, help="Imaginary offset")
        schwarz_parser.add_argument("--output", type=str, help="CSV path (default stdout)")
        schwarz_parser.add_argument("--svg", type=str, help="SVG scatter path")
        schwarz_parser.add_argument("--jobs", type=int)
        schwarz_parser.add_argument("--nodes", type=int)
        self._add_format(schwarz_parser, choices=("csv",))

        covers_parser = subparsers.add_parser("covers", help="Classify four-point cyclic covers")
        covers_parser.add_argument("--max-n", type=int, default=60)
        covers_parser.add_argument("--euler-char", type=int, default=covers.GENUS2_EULER_CHAR)
        self._add_format(covers_parser)

    def _add_format(self, parser, choices: Tuple[str, ...] = ("text", "json")) -> None:
        parser.add_argument(
            "--format",
            choices=choices,
            default=choices[0],
            help=f"Output format ({', '.join(choices)}); schwarz writes CSV, the rest text or JSON",
        )

    def handle(self, *args, **options):
        """Execute the command."""
        if options["verbosity"] >= 2:
            logging.getLogger("django_hyperlab").setLevel(logging.DEBUG)

        handler = getattr(self, f"handle_{options['subcommand']}")
        try:
            handler(options)
        except HyperlabError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)
        except (ValueError, ZeroDivisionError) as e:
            raise CommandError(f"Invalid input: {e}", returncode=USAGE_ERROR)

    # -------------------------------------------------------------------------
    # Output helpers
    # -------------------------------------------------------------------------

    def _emit(self, options: Dict, kind: str, payload: Dict, text: str) -> None:
        if options.get("format") == "json":
            self.stdout.write(dumps(build_document(kind, payload)), ending="")
        else:
            self.stdout.write(text)

    def _fail(self, message: str) -> None:
        raise CommandError(message, returncode=CHECK_FAILED)

    # -------------------------------------------------------------------------
    # Subcommands
    # -------------------------------------------------------------------------

    def handle_eval(self, options: Dict) -> None:
        series_id, param_names, coord_names = EVAL_SIGNATURES[options["series"]]
        missing = [_flag(name) for name in param_names + coord_names if options.get(name) is None]
        if missing:
            raise CommandError(
                f"eval {options['series']} requires {', '.join(missing)}", returncode=USAGE_ERROR
            )
        params = [parse_param(options[name]) for name in param_names]
        point = [parse_complex(options[name]) for name in coord_names]
        opts = SeriesOptions.from_settings(
            tol=options.get("tol"), max_terms=options.get("max_terms")
        )
        value = evaluate(series_id, params, point, opts)
        payload = {
            "series": series_id,
            "params": dict(zip(param_names, params)),
            "point": dict(zip(coord_names, point)),
            "value": value,
        }
        self._emit(options, "eval", payload, format_complex(value))

    def handle_verify(self, options: Dict) -> None:
        from django_hyperlab.verification import VerificationRunner, suite_names

        suite = options["suite"]
        try:
            suite_names(suite)
        except ValueError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)

        runner = VerificationRunner(
            seed=options.get("seed"),
            tol=options.get("tol"),
            jobs=options.get("jobs"),
            draws=options.get("draws"),
        )
        results = runner.run(suite)
        if options.get("format") == "json":
            output = dumps(suite_document(suite, results, runner.seed))
        else:
            output = format_text(results)

        if options.get("output"):
            Path(options["output"]).write_text(output)
            self.stdout.write(f"Report written to {options['output']}")
        else:
            self.stdout.write(output, ending="")

        failed = [result.check_id for result in results if not result.passed]
        if failed:
            self._fail(f"{len(failed)} check(s) failed: {', '.join(failed)}")

    def handle_monodromy(self, options: Dict) -> None:
        names = ("a", "b", "bp", "c", "cp")
        if options["random"]:
            seed = hyperlab_settings.seed if options.get("seed") is None else options["seed"]
            mu = monodromy.random_admissible_mu(np.random.default_rng(seed))
            source: Dict[str, Any] = {"random": True, "seed": seed}
        else:
            missing = [_flag(name) for name in names if options.get(name) is None]
            if missing:
                raise CommandError(
                    f"monodromy requires {', '.join(missing)} or --random", returncode=USAGE_ERROR
                )
            params = ParamSet.parse(*(options[name] for name in names))
            mu = monodromy.mu_from_params(params, exact=options["exact"])
            source = {"params": params.to_dict()}

        variant = options["variant"]
        H = monodromy.intersection_matrix(mu)
        matrices = {}
        for i in monodromy.CIRCUIT_INDICES:
            matrices[f"M{i}"] = monodromy.circuit_matrix(i, mu, variant)
            matrices[f"Mt{i}"] = monodromy.dual_circuit_matrix(i, mu, variant)
        pairing = monodromy.check_pairing_invariance(mu, variant)
        passed = pairing["max_deviation"] < PAIRING_TOL

        payload = {
            "source": source,
            "variant": variant,
            "mu": mu.to_dict(),
            "H": monodromy.matrix_to_json(H),
            "det_H": monodromy.determinant(H),
            "det_closed_form": monodromy.intersection_determinant_closed_form(mu),
            "matrices": {name: monodromy.matrix_to_json(m) for name, m in matrices.items()},
            "pairing_max_deviation": pairing["max_deviation"],
            "pass": passed,
        }
        lines = [f"mu = {', '.join(_entry_text(value) for value in mu.values)}", "H ="]
        lines.append(format_matrix(H, _entry_text))
        lines.append(f"det H = {_entry_text(payload['det_H'])}")
        for name, matrix in matrices.items():
            lines.extend([f"{name} =", format_matrix(matrix, _entry_text)])
        lines.append(f"pairing max deviation = {pairing['max_deviation']:.3e}")
        self._emit(options, "monodromy", payload, "\n".join(lines))
        if not passed:
            self._fail(f"Pairing deviation {pairing['max_deviation']:.3e} exceeds {PAIRING_TOL}")

    def handle_special(self, options: Dict) -> None:
        failures = []
        matrices = {}
        for which in ("M", "Mt"):
            for i in monodromy.CIRCUIT_INDICES:
                try:
                    matrices[f"{which}{i}"] = eisenstein.specialize_omega(i, which)
                except HyperlabError as e:
                    failures.append(f"{which}{i}: {e}")
                    matrices[f"{which}{i}"] = eisenstein.special_table(i, which)

        invariance = eisenstein.check_special_invariance()
        hermitian = eisenstein.hermitian_transform_check()
        images = {}
        for i, (expected, scalar) in eisenstein.REDUCED_IMAGES.items():
            image, found_scalar = eisenstein.conjugate_by_P(i)
            images[f"M{i}"] = {"image": image, "scalar": found_scalar}
            if image != expected or found_scalar != scalar:
                failures.append(f"P M'{i} P^-1 = {found_scalar} * {image.rows()}")
            elif not eisenstein.gamma1_3_membership(image):
                failures.append(f"P M'{i} P^-1 outside Gamma_1(3)")
        if not invariance["passed"]:
            failures.append("M_i H M~_i != H at omega^2")
        if not hermitian["passed"]:
            failures.append("P H' P* != sqrt(-3) J")

        payload = {
            "H": eisenstein.special_h(),
            "matrices": matrices,
            "reduced_images": images,
            "invariance": invariance["passed"],
            "hermitian": hermitian["passed"],
            "failures": failures,
            "pass": not failures,
        }
        lines = ["H =", str(eisenstein.special_h())]
        for name, matrix in matrices.items():
            lines.extend([f"{name} =", str(matrix)])
        for name, data in images.items():
            lines.append(f"P {name}' P^-1 = {data['scalar']} * {data['image'].rows()}")
        lines.append(f"invariance: {'pass' if invariance['passed'] else 'FAIL'}")
        lines.append(f"hermitian transform: {'pass' if hermitian['passed'] else 'FAIL'}")
        self._emit(options, "special", payload, "\n".join(lines))
        if failures:
            self._fail("; ".join(failures))

    def handle_periods(self, options: Dict) -> None:
        s, t = parse_complex(options["s"]), parse_complex(options["t"])
        result = periods.abel_jacobi(options["k"], s, t, options.get("nodes"))
        payload = {
            "k": options["k"],
            "s": s,
            "t": t,
            "value": result.value,
            "err_estimate": result.err_estimate,
        }
        text = f"{format_complex(result.value)}  err_estimate={result.err_estimate:.3e}"
        self._emit(options, "periods", payload, text)

    def handle_schwarz(self, options: Dict) -> None:
        count = options["count"]
        if count < 1:
            raise CommandError("--count must be positive", returncode=USAGE_ERROR)
        real_parts = np.linspace(options["t_min"], options["t_max"], count)
        samples = [complex(value, options["imag"]) for value in real_parts]
        if options.get("output"):
            with open(options["output"], "w", newline="") as out:
                sample = periods.sample_disc_image(
                    samples, out, options.get("svg"), options.get("jobs"), options.get("nodes")
                )
        else:
            sample = periods.sample_disc_image(
                samples, self.stdout, options.get("svg"), options.get("jobs"), options.get("nodes")
            )
        if sample.skipped:
            self.stderr.write(f"Skipped {len(sample.skipped)} sample(s)")
        if not sample.constant_sign:
            self._fail(f"Sign witness not constant: signs {sample.signs}")

    def handle_covers(self, options: Dict) -> None:
        found = covers.classify(options["max_n"], options["euler_char"])
        payload = {
            "max_n": options["max_n"],
            "euler_char": options["euler_char"],
            "signatures": [sig.to_dict() for sig in found],
        }
        lines = []
        for sig in found:
            curve = covers.CURVE_ANNOTATIONS.get(sig)
            lines.append(f"{sig}  {curve}" if curve else str(sig))
        self._emit(options, "covers", payload, "\n".join(lines))
