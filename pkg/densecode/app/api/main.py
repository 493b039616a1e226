from typing import List, Optional

from fastapi import HTTPException, Query
from pydantic import ValidationError

from densecode.app.api.models import EvalRequest, EvalResponse, CapacityRecord, VerdictOut, TheoremInfo
from densecode.app.service import DenseCodeApp
from densecode.core.evaluation import evaluate_state, load_named_state
from densecode.core.schemas import SweepConfig, SweepReport
from densecode.core.sweep import SweepRunner
from densecode.core.theorems import REQUIREMENTS
from densecode.utils.dataclasses import CapacityResult
from densecode.utils.errors import RejectedInputError


app = DenseCodeApp()


def _capacity_record(result: CapacityResult) -> CapacityRecord:
    receiver = list(result.receiver) if isinstance(result.receiver, tuple) else result.receiver
    return CapacityRecord(
        senders=list(result.senders),
        receiver=receiver,
        quantum_part=result.quantum_part,
        classical_floor=result.classical_floor,
        full_capacity=result.full_capacity,
        advantage=result.advantage,
    )


@app.post("/eval", response_model=EvalResponse)
def evaluate(request: EvalRequest):
    try:
        s = load_named_state(request.state, request.dims) if request.state else request.state_file.to_state()
        evaluation = evaluate_state(
            s,
            theorems=request.theorems,
            alice=request.alice,
            discord_starts=request.discord_starts or app.container.config.discord_starts(),
        )
    except (RejectedInputError, ValidationError) as e:
        raise HTTPException(status_code=422, detail=str(e))

    return EvalResponse(
        dims=list(evaluation.dims),
        fingerprint=evaluation.fingerprint,
        pairwise=[_capacity_record(r) for r in evaluation.pairwise],
        multiport=[_capacity_record(r) for r in evaluation.multiport],
        verdicts=[
            VerdictOut(theorem=v.theorem_id, lhs=v.lhs, rhs=v.rhs, slack=v.slack, holds=v.holds,
                       applicable=v.applicable, details=v.details)
            for v in evaluation.verdicts
        ],
        all_hold=evaluation.all_hold,
    )


@app.post("/sweep", response_model=SweepReport)
async def sweep(
    config: SweepConfig,
    max_concurrency: Optional[int] = Query(None, ge=1, description="Concurrent samples (default: thread count)"),
    checkpoint: bool = Query(False, description="Checkpoint verdicts to the sweep store"),
    start_fresh: bool = Query(False, description="Discard checkpointed verdicts of the same run")
):
    # reports are returned, never written server side
    config = config.model_copy(update={"output_path": None})
    store = app.container.sweep_store() if checkpoint else None
    try:
        runner = SweepRunner(store=store, start_fresh=start_fresh)
        return await runner.arun(config, max_concurrency=max_concurrency)
    except RejectedInputError as e:
        raise HTTPException(status_code=422, detail=str(e))


@app.get("/theorems", response_model=List[TheoremInfo])
def theorems():
    return [
        TheoremInfo(
            theorem=theorem,
            min_parties=req.min_parties,
            max_parties=req.max_parties,
            pure_only=req.pure,
            qubits_only=req.qubits,
            description=req.description,
        )
        for theorem, req in REQUIREMENTS.items()
    ]


if __name__ == '__main__':
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
