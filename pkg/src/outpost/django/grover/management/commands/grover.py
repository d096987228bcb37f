import json
import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd
from django.core.exceptions import ValidationError
from django.core.management.base import (
    BaseCommand,
    CommandError,
)
from pydantic import ValidationError as SchemaError

from ... import (
    double,
    fitting,
    iteration,
    schemes,
    statevector,
)
from ...conf import settings
from ...exceptions import GroverError
from ...operators import (
    PhaseSchedule,
    normalize_phase,
    probability_profile,
)
from ...schemas import (
    CrossCheckSchema,
    FitReportSchema,
    LandscapeSchema,
    PhaseScheduleSchema,
    TwoPhaseSolutionSchema,
)
from ...validators import (
    GridValidator,
    PhaseListValidator,
    QubitValidator,
)

logger = logging.getLogger(__name__)


def parse_grid(text: str) -> tuple[float, float, int]:
    try:
        lower, upper, count = text.split(":")
        spec = (float(lower), float(upper), int(count))
    except ValueError:
        raise ValidationError(f"Grid {text!r} is not of the form min:max:count")
    GridValidator()(spec)
    return spec


def parse_bracket(text: str) -> tuple[float, float]:
    try:
        lower, upper = (float(v) for v in text.split(":"))
    except ValueError:
        raise ValidationError(f"Bracket {text!r} is not of the form min:max")
    return lower, upper


def parse_reals(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"{text!r} is not a comma separated list of numbers")
    PhaseListValidator()(values)
    return values


def parse_phases(text: str) -> list[float]:
    return [normalize_phase(v) for v in parse_reals(text)]


def parse_marked(text: str) -> tuple[list[int], bool]:
    """
    Either comma separated basis state indices or a single count of random
    marked states, the flag tells which.
    """
    explicit = "," in text
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(
            f"Marked states {text!r} are neither a count nor a list of indices"
        )
    if not values:
        raise ValidationError("At least one marked state is needed")
    return values, explicit


class Command(BaseCommand):
    help = "Evaluates, fits and verifies phase matched Grover schedules."
    leave_locale_alone = True

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="subcommand", required=True)

        def schedule_options(sub):
            sub.add_argument("--alphas", help="Comma separated oracle phases")
            sub.add_argument(
                "--betas",
                help="Comma separated diffusion phases, matched to --alphas if omitted",
            )
            sub.add_argument("--schedule", type=Path, help="JSON schedule document")

        def output_option(sub):
            sub.add_argument("--out", type=Path, help="Output file, default stdout")

        sub = subparsers.add_parser("profile", help="Success probability per stage")
        schedule_options(sub)
        sub.add_argument("--k", type=int, help="Repeat a single phase pair k times")
        sub.add_argument("--grid", default="0:1:1001")
        output_option(sub)

        sub = subparsers.add_parser("fit", help="Fit a matched schedule")
        sub.add_argument("--k", type=int, required=True)
        sub.add_argument("--grid", help="Fit grid, default from settings")
        sub.add_argument("--seed", type=int)
        sub.add_argument("--restarts", type=int)
        sub.add_argument(
            "--objective", choices=[o.value for o in fitting.Objective]
        )
        sub.add_argument("--profile-out", type=Path, help="CSV of the fitted profile")
        output_option(sub)

        sub = subparsers.add_parser("solve2", help="Two stage phases for given roots")
        sub.add_argument("--lambdas", help="Two comma separated marked fractions")
        sub.add_argument(
            "--surface", type=int, help="Dump the discriminant on a COUNT² phase grid"
        )
        output_option(sub)

        sub = subparsers.add_parser("roots", help="Unit roots and local minima")
        schedule_options(sub)
        sub.add_argument("--bracket", default="0:1")
        output_option(sub)

        sub = subparsers.add_parser("iterate", help="Repetition of one matched step")
        sub.add_argument("--alphas", help="Single oracle phase")
        sub.add_argument("--k", type=int)
        sub.add_argument("--lambda", dest="frac", type=float)
        output_option(sub)

        sub = subparsers.add_parser("envelope", help="Lower probability envelope")
        sub.add_argument("--alphas", required=True)
        sub.add_argument("--grid", default="0:1:201")
        output_option(sub)

        sub = subparsers.add_parser("classical", help="Classical sampling baseline")
        sub.add_argument("--N", dest="size", type=int, required=True)
        sub.add_argument("--marked", type=int, required=True)
        sub.add_argument("--k", type=int, required=True)
        output_option(sub)

        sub = subparsers.add_parser("verify", help="Cross check on the full register")
        schedule_options(sub)
        sub.add_argument("--n", type=int, required=True)
        sub.add_argument(
            "--marked",
            required=True,
            help="Count of random marked states, or comma separated indices",
        )
        sub.add_argument("--k", type=int, help="Stages of a random schedule")
        sub.add_argument("--seed", type=int, default=0)
        output_option(sub)

        sub = subparsers.add_parser("equiv", help="Compare both phase conventions")
        sub.add_argument("--alphas", required=True)
        sub.add_argument("--betas", required=True)
        sub.add_argument("--lambda", dest="frac", type=float, required=True)
        sub.add_argument("--k", type=int, default=1)
        output_option(sub)

    def handle(self, *args, **options):
        name = options["subcommand"]
        handler = getattr(self, f"handle_{name}")
        try:
            handler(options)
        except GroverError as e:
            logger.error(f"{name} failed: {e}")
            raise CommandError(str(e), returncode=e.exit_status)
        except ValidationError as e:
            logger.error(f"{name} rejected its input: {e}")
            raise CommandError("; ".join(e.messages), returncode=1)
        except SchemaError as e:
            logger.error(f"{name} rejected its schedule: {e}")
            raise CommandError(str(e), returncode=1)

    def emit(self, text: str, path=None):
        if path:
            Path(path).write_text(text, encoding="utf-8")
            logger.info(f"Wrote {path}")
        else:
            self.stdout.write(text, ending="")

    def emit_frame(self, frame: pd.DataFrame, path=None):
        self.emit(
            frame.to_csv(
                float_format=settings.GROVER_CSV_FLOAT_FORMAT,
                index=False,
                lineterminator="\n",
            ),
            path,
        )

    def emit_json(self, data, path=None):
        self.emit(json.dumps(data, indent=2) + "\n", path)

    def load_schedule(self, options, required: bool = True) -> PhaseSchedule:
        if options.get("schedule"):
            path = options["schedule"]
            try:
                document = json.loads(Path(path).read_text(encoding="utf-8"))
            except OSError as e:
                raise CommandError(f"Cannot read {path}: {e}", returncode=1)
            except json.JSONDecodeError as e:
                raise CommandError(
                    f"Malformed schedule {path} at line {e.lineno}: {e.msg}",
                    returncode=1,
                )
            return PhaseScheduleSchema.model_validate(document).to_schedule()
        if options.get("alphas"):
            alphas = parse_reals(options["alphas"])
            betas = parse_reals(options["betas"]) if options.get("betas") else None
            return PhaseScheduleSchema(alphas=alphas, betas=betas).to_schedule()
        if required:
            raise CommandError(
                "A schedule is required, use --alphas or --schedule", returncode=1
            )
        return PhaseSchedule()

    def handle_profile(self, options):
        schedule = self.load_schedule(options)
        if options.get("k"):
            if len(schedule) != 1:
                raise CommandError("--k repeats exactly one phase pair", returncode=1)
            pair = schedule.pairs[0]
            schedule = PhaseSchedule.repeated(pair.alpha, options["k"], beta=pair.beta)
        if not len(schedule):
            raise CommandError("Schedule needs at least one stage", returncode=1)
        lower, upper, count = parse_grid(options["grid"])
        profile = probability_profile(schedule, np.linspace(lower, upper, count))
        self.emit_frame(profile.to_frame(), options.get("out"))

    def handle_fit(self, options):
        overrides = {
            key: options[key]
            for key in ("seed", "restarts", "objective")
            if options.get(key) is not None
        }
        if options.get("grid"):
            overrides["lambda_grid"] = fitting.default_grid(parse_grid(options["grid"]))
        config = fitting.FitConfig(k=options["k"], **overrides)
        report = fitting.fit_schedule(config)
        document = FitReportSchema.from_report(report, settings.GROVER_REPORT_DIGITS)
        self.emit(document.model_dump_json(indent=2) + "\n", options.get("out"))
        if options.get("profile_out"):
            self.emit_frame(report.profile().to_frame(), options["profile_out"])
        if not report.converged:
            raise CommandError(
                f"Fit of {config.k} stages did not converge", returncode=2
            )

    def handle_solve2(self, options):
        if options.get("surface"):
            count = options["surface"]
            if count < 2:
                raise CommandError("--surface needs at least 2 points", returncode=1)
            phases = np.linspace(0, 2 * math.pi, count)
            rows = []
            for alpha1 in phases:
                for alpha2 in phases:
                    value, degenerate = double.discriminant_surface(alpha1, alpha2)
                    smaller = double.smaller_root(alpha1, alpha2)
                    rows.append(
                        {
                            "alpha1": alpha1,
                            "alpha2": alpha2,
                            "discriminant": value,
                            "degenerate": degenerate,
                            "smaller_root": np.nan if smaller is None else smaller,
                        }
                    )
            self.emit_frame(pd.DataFrame(rows), options.get("out"))
            return
        if not options.get("lambdas"):
            raise CommandError("Use --lambdas or --surface", returncode=1)
        fractions = parse_reals(options["lambdas"])
        if len(fractions) != 2:
            raise CommandError("--lambdas takes exactly two values", returncode=1)
        solutions = double.solve_phases_for_roots(*sorted(fractions))
        self.emit_json(
            [
                TwoPhaseSolutionSchema.from_solution(s).model_dump(mode="json")
                for s in solutions
            ],
            options.get("out"),
        )

    def handle_roots(self, options):
        schedule = self.load_schedule(options)
        landscape = fitting.unit_roots_and_minima(
            schedule, parse_bracket(options["bracket"])
        )
        document = LandscapeSchema.from_landscape(landscape)
        self.emit(document.model_dump_json(indent=2) + "\n", options.get("out"))

    def handle_iterate(self, options):
        result = {}
        if options.get("frac") is not None:
            count = iteration.optimal_iterations(options["frac"])
            result["lambda"] = options["frac"]
            result["iterations"] = count.iterations
            result["estimate"] = count.estimate
        if options.get("alphas"):
            alphas = parse_phases(options["alphas"])
            if len(alphas) != 1 or not options.get("k"):
                raise CommandError(
                    "--alphas takes a single phase together with --k", returncode=1
                )
            alpha, k = alphas[0], options["k"]
            result["alpha"] = alpha
            result["k"] = k
            result["unity_roots"] = iteration.unity_roots_single_phase(alpha, k)
            result["min_lambda_estimate"] = iteration.min_lambda_estimate(alpha, k)
        if not result:
            raise CommandError("Use --lambda or --alphas with --k", returncode=1)
        self.emit_json(result, options.get("out"))

    def handle_envelope(self, options):
        alphas = parse_phases(options["alphas"])
        lower, upper, count = parse_grid(options["grid"])
        lambdas = np.linspace(lower, upper, count)
        columns = {"lambda": lambdas}
        for alpha in alphas:
            columns[f"alpha={alpha:.12g}"] = iteration.envelope_curve(lambdas, alpha)
        self.emit_frame(pd.DataFrame(columns), options.get("out"))

    def handle_classical(self, options):
        frac = schemes.marked_fraction(options["marked"], options["size"])
        if options["k"] < 1:
            raise CommandError("--k must be at least 1", returncode=1)
        rows = []
        for k in range(1, options["k"] + 1):
            result = schemes.classical_probability(frac, k, options["size"])
            rows.append({"k": k, **result._asdict()})
        self.emit_frame(pd.DataFrame(rows), options.get("out"))

    def handle_verify(self, options):
        n = options["n"]
        QubitValidator(settings.GROVER_STATEVECTOR_MAX_QUBITS)(n)
        rng = np.random.default_rng(options["seed"])
        values, explicit = parse_marked(options["marked"])
        if explicit:
            marked = statevector.marked_set(n, values)
        else:
            marked = statevector.random_marked_set(n, values[0], rng)
        schedule = self.load_schedule(options, required=False)
        if not len(schedule):
            if not options.get("k"):
                raise CommandError(
                    "Use --alphas, --schedule or --k for a random schedule",
                    returncode=1,
                )
            phases = rng.uniform(0, 2 * math.pi, size=(options["k"], 2))
            schedule = PhaseSchedule.from_phases(phases[:, 0], phases[:, 1])
        check = statevector.cross_check(schedule, n, marked)
        equivalence = max(
            schemes.scheme_equivalence_check(
                pair.alpha, pair.beta, marked.fraction, 1
            ).probability_gap
            for pair in schedule
        )
        passed = (
            max(check.max_gap, check.uniformity_gap) <= settings.GROVER_VERIFY_TOLERANCE
            and equivalence <= settings.GROVER_EQUIVALENCE_TOLERANCE
        )
        document = CrossCheckSchema.from_check(
            check, n, len(marked), passed, equivalence_gap=equivalence
        )
        self.emit(document.model_dump_json(indent=2) + "\n", options.get("out"))
        if not passed:
            raise CommandError(
                f"Verification failed with gap {check.max_gap}", returncode=3
            )

    def handle_equiv(self, options):
        alphas = parse_phases(options["alphas"])
        betas = parse_phases(options["betas"])
        if len(alphas) != 1 or len(betas) != 1:
            raise CommandError("--alphas and --betas take one phase each", returncode=1)
        result = schemes.scheme_equivalence_check(
            alphas[0], betas[0], options["frac"], options["k"], strict=True
        )
        self.emit_json(result._asdict(), options.get("out"))
