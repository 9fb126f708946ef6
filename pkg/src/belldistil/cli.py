"""Command-line front end.

Subcommands::

    step           closed-form report for one distillation step
    nmin           minimal-sample-size sweep over Werner fidelity (CSV)
    iterate        expected fidelity of the iterative scheme for one (N, A0)
    fig3           relative-fidelity sweep over A0 for several N (CSV)
    fig4           fidelity sweep over N at fixed A0, three curves (CSV)
    verify-oracle  closed-form maps vs the density-matrix simulation

CSV cells are decimal floats with 12 significant digits; rows are ordered
by the sweep variable and the file ends with a newline.  Exit codes:
0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import sys
from typing import Iterable, TextIO

from .bell_core import (
    BellDiagonalState,
    avg_fidelity_single_conditional,
    avg_fidelity_single_locc,
    distill_step,
    is_distillable,
    werner,
)
from .errors import (
    FallbackAboveTargetError,
    InvalidStateError,
    NotDistillableError,
    ResourceCapError,
)
from .finite_ensemble import UnsuccessfulConvention, n_min, round_up_even
from .iterative_scheme import (
    IterationPolicy,
    expected_fidelity_exact,
    expected_fidelity_mc,
    fully_successful_fidelity,
)
from .oracle import compare_with_closed_form, verify_rotation_choice

USAGE_ERROR = 2
RESOURCE_ERROR = 3

_POLICIES = {
    "backup": IterationPolicy(),
    "nobackup": IterationPolicy(backup_enabled=False),
    "drop-even": IterationPolicy(drop_one_when_even=True),
}


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _a_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0 or start >= stop:
        raise ValueError("grid requires step > 0 and start < stop")
    n = int(round((stop - start) / step))
    return [round(start + i * step, 12) for i in range(n + 1)]


def _write_csv(out: TextIO, header: list[str], rows: Iterable[list[str]]) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(row) + "\n")


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="ascii", newline="\n"), True


def _parse_state(values: list[float]) -> BellDiagonalState:
    if any(v < 0 for v in values):
        raise InvalidStateError(f"negative coefficient in {values!r}")
    total = sum(values)
    dev = abs(total - 1.0)
    if dev > 1e-9:
        raise InvalidStateError(
            f"coefficients sum to {total!r}; deviations above 1e-9 are rejected"
        )
    if dev > 1e-12:
        print(
            f"warning: renormalizing input (sum deviates by {dev:.3g})",
            file=sys.stderr,
        )
        values = [v / total for v in values]
    return BellDiagonalState(*values)


def cmd_step(args: argparse.Namespace) -> int:
    try:
        s = _parse_state([args.a, args.b, args.c, args.d])
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    outcome = distill_step(s)
    print(f"input state           {s.serialize()}")
    print(f"distillable           {'yes' if is_distillable(s) else 'no'}")
    print(f"p_success             {_fmt(outcome.p_success)}")
    print(f"success state         {outcome.success_state.serialize()}")
    print(f"failure state         {outcome.failure_state.serialize()}"
          + ("" if outcome.failure_reachable else "  (unreachable)"))
    print(f"F(success)            {_fmt(outcome.success_state.a)}")
    print(f"F(failure)            {_fmt(outcome.failure_state.a)}")
    print(f"avg fidelity (locc)   {_fmt(avg_fidelity_single_locc(s))}")
    print(f"avg fidelity (cond)   {_fmt(avg_fidelity_single_conditional(s))}")
    return 0


def cmd_nmin(args: argparse.Namespace) -> int:
    rows = []
    for a in _a_grid(args.start, args.stop, args.step):
        cells = [_fmt(a)]
        for conv in (UnsuccessfulConvention.LOCC_FLOOR, UnsuccessfulConvention.CONDITIONAL):
            try:
                value = n_min(werner(a), conv)
                cells += [_fmt(value), str(round_up_even(value))]
            except (NotDistillableError, FallbackAboveTargetError):
                cells += ["", ""]
        rows.append(cells)
    out, close = _open_out(args.out)
    try:
        _write_csv(
            out,
            ["A", "nmin_locc", "nmin_locc_even", "nmin_conditional", "nmin_conditional_even"],
            rows,
        )
    finally:
        if close:
            out.close()
    return 0


def _conditional_floor(s: BellDiagonalState) -> float:
    step = distill_step(s)
    return min(0.5, step.failure_state.a) if step.failure_reachable else 0.5


def cmd_iterate(args: argparse.Namespace) -> int:
    policy = _POLICIES[args.policy]
    s0 = werner(args.a0)
    if args.fu == "conditional":
        policy = IterationPolicy(
            backup_enabled=policy.backup_enabled,
            drop_one_when_even=policy.drop_one_when_even,
            failure_fidelity=_conditional_floor(s0),
        )
    reference = fully_successful_fidelity(s0, args.n)
    if args.method == "exact":
        try:
            value = expected_fidelity_exact(args.n, s0, policy)
        except ResourceCapError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return RESOURCE_ERROR
        print(f"expected fidelity     {_fmt(value)}")
    else:
        stats = expected_fidelity_mc(args.n, s0, policy, args.trials, args.seed)
        print(f"mean fidelity         {_fmt(stats.mean_fidelity)}")
        print(f"std error             {_fmt(stats.std_error)}")
        print(f"failure rate          {_fmt(stats.failure_rate)}")
        print(f"trials                {stats.trials}")
    print(f"all-success reference {_fmt(reference)}")
    return 0


def cmd_fig3(args: argparse.Namespace) -> int:
    policy = _POLICIES[args.policy]
    n_list = args.n_list
    grid = _a_grid(args.start, args.stop, args.step)
    rows = []
    for a0 in grid:
        cells = [_fmt(a0)]
        for n in n_list:
            value = expected_fidelity_exact(n, werner(a0), policy)
            cells.append(_fmt(value / a0))
        rows.append(cells)
    out, close = _open_out(args.out)
    try:
        _write_csv(out, ["A0"] + [f"ratio_N{n}" for n in n_list], rows)
    finally:
        if close:
            out.close()
    return 0


def cmd_fig4(args: argparse.Namespace) -> int:
    s0 = werner(args.a0)
    rows = []
    for n in range(args.n_start, args.n_stop + 1):
        rows.append(
            [
                str(n),
                _fmt(expected_fidelity_exact(n, s0, _POLICIES["nobackup"])),
                _fmt(expected_fidelity_exact(n, s0, _POLICIES["backup"])),
                _fmt(fully_successful_fidelity(s0, n)),
            ]
        )
    out, close = _open_out(args.out)
    try:
        _write_csv(out, ["N", "nobackup", "backup", "fully_successful"], rows)
    finally:
        if close:
            out.close()
    return 0


def cmd_verify_oracle(args: argparse.Namespace) -> int:
    rotation = verify_rotation_choice(min(args.samples, 1000), args.seed)
    report = compare_with_closed_form(args.samples, args.seed)
    print(f"rotation convention   {'pass' if rotation.passed else 'FAIL'}"
          f" (max deviation {rotation.max_deviation:.3g})")
    print(f"samples               {report.samples}")
    print(f"max p deviation       {report.max_p_deviation:.3g}")
    print(f"max success deviation {report.max_success_deviation:.3g}")
    print(f"max failure deviation {report.max_failure_deviation:.3g}")
    if rotation.passed and report.max_deviation < 1e-10:
        print("verdict               pass")
        return 0
    print(f"verdict               FAIL (worst state {report.worst_state})")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="belldistil",
        description="Iterative CNOT entanglement distillation for finite samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("step", help="closed-form report for one distillation step")
    for name in "abcd":
        p.add_argument(name, type=float, help=f"Bell coefficient {name}")
    p.set_defaults(func=cmd_step)

    p = sub.add_parser("nmin", help="minimal sample size sweep over Werner fidelity")
    p.add_argument("--start", type=float, default=0.505)
    p.add_argument("--stop", type=float, default=0.995)
    p.add_argument("--step", type=float, default=0.005)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_nmin)

    p = sub.add_parser("iterate", help="expected fidelity of the iterative scheme")
    p.add_argument("--n", type=int, required=True, help="initial pair count")
    p.add_argument("--a0", type=float, required=True, help="Werner fidelity")
    p.add_argument("--policy", choices=sorted(_POLICIES), default="backup")
    p.add_argument("--method", choices=["exact", "mc"], default="exact")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--fu",
        choices=["locc", "conditional"],
        default="locc",
        help="fidelity credited to a failed run: the LOCC floor 1/2 or the "
        "conditioned failure-state fidelity of the input",
    )
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("fig3", help="relative fidelity sweep over A0 (CSV)")
    p.add_argument("--n-list", type=lambda v: [int(x) for x in v.split(",")],
                   default=[4, 5, 6], help="comma-separated pair counts")
    p.add_argument("--start", type=float, default=0.505)
    p.add_argument("--stop", type=float, default=0.995)
    p.add_argument("--step", type=float, default=0.005)
    p.add_argument("--policy", choices=sorted(_POLICIES), default="backup")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("fig4", help="fidelity sweep over N at fixed A0 (CSV)")
    p.add_argument("--a0", type=float, default=0.75)
    p.add_argument("--n-start", type=int, default=3)
    p.add_argument("--n-stop", type=int, default=40)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("verify-oracle", help="closed form vs density-matrix oracle")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
