import click
import json
from typing import List, Optional, Tuple

from pydantic import ValidationError

from densecode.app.service import DenseCodeApp, configure_logging
from densecode.core.evaluation import StateEvaluation, evaluate_state, load_named_state, party_label
from densecode.core.schemas import SweepConfig, load_state_file
from densecode.core.states import NAMED_STATES
from densecode.core.sweep import SweepRunner, render_report
from densecode.core.theorems import REQUIREMENTS
from densecode.utils.dataclasses import CapacityResult, TheoremId
from densecode.utils.errors import RejectedInputError


INPUT_ERROR_EXIT = 1
VERDICT_FAILURE_EXIT = 2
CLI_LOG_LEVEL = "WARNING"


class DenseCodeGroup(click.Group):
    """Usage errors exit with the input-error code; exit 2 is reserved for failed verdicts."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = INPUT_ERROR_EXIT
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = INPUT_ERROR_EXIT
            raise


def _split(value: str) -> List[str]:
    return [item.strip() for item in value.split(',') if item.strip()]


def parse_ints(value: Optional[str], option: str) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [int(item) for item in _split(value)]
    except ValueError:
        raise click.ClickException(f"{option} expects comma-separated integers, got '{value}'")


def parse_floats(value: Optional[str], option: str) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        return [float(item) for item in _split(value)]
    except ValueError:
        raise click.ClickException(f"{option} expects comma-separated numbers, got '{value}'")


def parse_theorems(value: Optional[str]) -> Optional[List[TheoremId]]:
    if value is None:
        return None
    try:
        return [TheoremId(item.upper()) for item in _split(value)]
    except ValueError:
        raise click.ClickException(
            f"unknown theorem in '{value}', expected ids from {[t.value for t in TheoremId]}"
        )


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _roles(result: CapacityResult) -> Tuple[str, str]:
    senders = ",".join(party_label(p) for p in result.senders)
    receivers = result.receiver if isinstance(result.receiver, tuple) else (result.receiver,)
    return senders, ",".join(party_label(p) for p in receivers)


def _capacity_line(result: CapacityResult) -> str:
    senders, receiver = _roles(result)
    return (f"  {senders:>8} -> {receiver:<4} quantum={_fmt(result.quantum_part):<16} "
            f"floor={_fmt(result.classical_floor):<6} full={_fmt(result.full_capacity):<16} "
            f"advantage={'yes' if result.advantage else 'no'}")


def _echo_evaluation(label: str, evaluation: StateEvaluation):
    click.echo(f"State: {label}  dims={evaluation.dims}  fingerprint={evaluation.fingerprint[:16]}")
    click.echo("\nPairwise capacities:")
    for result in evaluation.pairwise:
        click.echo(_capacity_line(result))
    if evaluation.multiport:
        click.echo("\nMulti-port capacities:")
        for result in evaluation.multiport:
            click.echo(_capacity_line(result))
    if evaluation.verdicts:
        click.echo("\nTheorems:")
        click.echo("-" * 80)
        click.echo(f"{'ID':<6} {'Verdict':<8} {'LHS':<18} {'RHS':<18} {'Slack':<18}")
        click.echo("-" * 80)
        for v in evaluation.verdicts:
            verdict = "n/a" if not v.applicable else ("PASS" if v.holds else "FAIL")
            click.echo(f"{v.theorem_id.value:<6} {verdict:<8} {_fmt(v.lhs):<18} {_fmt(v.rhs):<18} {_fmt(v.slack):<18}")


def _evaluation_as_json(evaluation: StateEvaluation) -> str:
    return json.dumps({
        'dims': list(evaluation.dims),
        'fingerprint': evaluation.fingerprint,
        'pairwise': [r.as_dict for r in evaluation.pairwise],
        'multiport': [r.as_dict for r in evaluation.multiport],
        'verdicts': [v.as_dict for v in evaluation.verdicts],
        'all_hold': evaluation.all_hold,
    }, indent=2)


@click.group(cls=DenseCodeGroup)
@click.version_option(version="0.1.0")
@click.option('--log-level', default=None, help=f'Logging level (default: DENSECODE_LOG_LEVEL or {CLI_LOG_LEVEL})')
@click.pass_context
def main(ctx, log_level: Optional[str]):
    """Dense coding capacities and exclusion/monogamy checks."""
    try:
        container = DenseCodeApp.init_services()
    except ValueError as e:
        raise click.ClickException(f"invalid environment configuration: {e}")
    configure_logging(log_level or container.config.log_level() or CLI_LOG_LEVEL)
    ctx.obj = container


@main.command(name='eval')
@click.option('--state', '-s', default=None, help=f'Named state, one of {", ".join(NAMED_STATES)}')
@click.option('--dims', default=None, help='Comma-separated local dimensions (default: 2,2,2; 2,2 for bell)')
@click.option('--file', 'state_file', default=None, help='JSON state file with dims, form and data')
@click.option('--alice', default=0, type=int, help='Party relabelled as the sender A (default: 0)')
@click.option('--theorems', '-t', default=None, help='Comma-separated theorem ids (default: all applicable)')
@click.option('--discord-starts', default=None, type=click.IntRange(min=1), help='Optimizer starts for discord (default: 32)')
@click.option('--json', 'as_json', is_flag=True, help='Print the evaluation as JSON')
@click.pass_obj
def evaluate(container, state: Optional[str], dims: Optional[str], state_file: Optional[str], alice: int,
             theorems: Optional[str], discord_starts: Optional[int], as_json: bool):
    """Evaluate capacities and theorem verdicts of one state."""
    if (state is None) == (state_file is None):
        raise click.ClickException("exactly one of --state or --file is required")

    try:
        if state is not None:
            s = load_named_state(state, parse_ints(dims, '--dims'))
        else:
            s = load_state_file(state_file)
        evaluation = evaluate_state(
            s,
            theorems=parse_theorems(theorems),
            alice=alice,
            discord_starts=discord_starts or container.config.discord_starts(),
        )
    except (RejectedInputError, ValidationError) as e:
        raise click.ClickException(str(e))

    if as_json:
        click.echo(_evaluation_as_json(evaluation))
    else:
        _echo_evaluation(state or state_file, evaluation)

    if not evaluation.all_hold:
        click.get_current_context().exit(VERDICT_FAILURE_EXIT)


@main.command()
@click.option('--dims', default=None, help='Comma-separated local dimensions, e.g. 2,2,2')
@click.option('--kind', '-k', default='mixed', help='pure (Haar) or mixed (induced) states (default: mixed)')
@click.option('--samples', '-n', default=100, type=int, help='Number of sampled states (default: 100)')
@click.option('--seed', default=0, type=int, help='Master seed, 0 <= seed < 2^64 (default: 0)')
@click.option('--theorems', '-t', default='T1', help='Comma-separated theorem ids (default: T1)')
@click.option('--output', '-o', default=None, help='Report path (default: print to stdout)')
@click.option('--format', 'fmt', default='json', help='Report format, json or csv (default: json)')
@click.option('--threads', default=None, type=int, help='Worker threads (default: DENSECODE_THREADS or 4)')
@click.option('--ancilla-dim', default=None, type=int, help='Ancilla dimension for induced mixed states')
@click.option('--noise-grid', default=None, help='Comma-separated ascending depolarizing levels for NOISE')
@click.option('--discord-starts', default=None, type=click.IntRange(min=1), help='Optimizer starts for discord (default: 32)')
@click.option('--checkpoint', is_flag=True, help='Checkpoint verdicts to DENSECODE_DB_URL and resume')
@click.option('--start-fresh', '-f', is_flag=True, help='Discard checkpointed verdicts of the same run')
@click.pass_obj
def sweep(container, dims: Optional[str], kind: str, samples: int, seed: int, theorems: str,
          output: Optional[str], fmt: str, threads: Optional[int], ancilla_dim: Optional[int],
          noise_grid: Optional[str], discord_starts: Optional[int], checkpoint: bool, start_fresh: bool):
    """Check theorems over a seeded sample of random states."""
    if dims is None:
        raise click.ClickException("--dims is required")

    fields = dict(
        dims=parse_ints(dims, '--dims'),
        kind=kind,
        samples=samples,
        seed=seed,
        theorems=parse_theorems(theorems),
        output_path=output,
        format=fmt,
        ancilla_dim=ancilla_dim,
    )
    grid = parse_floats(noise_grid, '--noise-grid')
    if grid is not None:
        fields['noise_grid'] = grid

    runner_options = {}
    if threads is not None:
        runner_options['max_workers'] = threads
    if discord_starts is not None:
        runner_options['discord_starts'] = discord_starts

    try:
        config = SweepConfig(**fields)
        store = container.sweep_store() if checkpoint else None
        runner = SweepRunner(store=store, start_fresh=start_fresh, **runner_options)
        report = runner.run(config)
    except (RejectedInputError, ValidationError) as e:
        raise click.ClickException(str(e))

    if output is None:
        click.echo(render_report(report, config.format), nl=False)
    else:
        for theorem, summary in report.summary.per_theorem.items():
            click.echo(f"{theorem}: held {summary.held}/{summary.checked}, applicable {summary.applicable}, "
                       f"min slack {summary.min_slack}", err=True)

    if not report.all_hold:
        click.get_current_context().exit(VERDICT_FAILURE_EXIT)


@main.command(name='theorems')
def list_theorems():
    """List theorem ids and the states they apply to."""
    for theorem, req in REQUIREMENTS.items():
        parties = str(req.min_parties) if req.max_parties == req.min_parties else f">={req.min_parties}"
        restrictions = [label for flag, label in ((req.pure, "pure"), (req.qubits, "qubits")) if flag]
        scope = f"{parties} parties" + (f", {', '.join(restrictions)}" if restrictions else "")
        click.echo(f"{theorem.value:<6} {scope:<28} {req.description}")


if __name__ == '__main__':
    main()
