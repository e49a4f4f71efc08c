import io
import logging
from typing import List, Optional

from fastapi import APIRouter, Depends, File, Form, HTTPException, UploadFile, status
from fastapi.responses import Response
from pydantic import ValidationError
from sqlalchemy.orm import Session

from app.crud.run_crud import RunCRUD
from app.database.connection import get_db
from app.multicut.exceptions import InstanceFormatError
from app.multicut.instance import parse_instance
from app.multicut.solver import solve
from app.reporting import render_svg
from app.schemas.solver import ConvergenceRecord, RunDetail, RunSimple, SolveConfig, StatusResponse

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/runs", tags=["runs"])


def _get_run_or_404(db: Session, run_id: int):
    run = RunCRUD.get_by_id(db=db, run_id=run_id)
    if run is None:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Run with ID {run_id} not found"
        )
    return run


@router.post("/", response_model=RunSimple, status_code=status.HTTP_201_CREATED)
def create_run(
    file: UploadFile = File(...),
    tighten: Optional[str] = Form(None),
    max_iterations: Optional[int] = Form(None),
    epsilon: Optional[float] = Form(None),
    db: Session = Depends(get_db)
):
    """Solve an uploaded instance and store the run."""
    try:
        text = file.file.read().decode("utf-8")
        instance = parse_instance(io.StringIO(text))
        config = SolveConfig.from_settings(tighten=tighten, max_iterations=max_iterations, epsilon=epsilon)
    except (InstanceFormatError, UnicodeDecodeError) as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"Invalid instance: {str(e)}"
        )
    except ValidationError as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"Invalid solver settings: {e.errors()[0]['msg']}"
        )

    try:
        result = solve(instance, config)
        return RunCRUD.create_from_result(
            db=db,
            instance_name=file.filename or "upload",
            instance=instance,
            result=result,
            tighten=config.tighten
        )
    except Exception as e:
        logger.exception("solve of %s failed", file.filename)
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Failed to solve instance: {str(e)}"
        )


@router.get("/", response_model=List[RunSimple])
def get_runs(db: Session = Depends(get_db)):
    """Get all stored runs."""
    return RunCRUD.get_all(db=db)


@router.get("/{run_id}", response_model=RunDetail)
def get_run(run_id: int, db: Session = Depends(get_db)):
    """Get a run with its convergence records."""
    return _get_run_or_404(db, run_id)


@router.get("/{run_id}/plot")
def get_run_plot(run_id: int, db: Session = Depends(get_db)):
    """Convergence plot of a run as SVG."""
    run = _get_run_or_404(db, run_id)
    records = [ConvergenceRecord.model_validate(point) for point in RunCRUD.get_records(db=db, run_id=run_id)]
    if not records:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Run with ID {run_id} has no convergence records"
        )
    return Response(content=render_svg(records, title=run.instance_name), media_type="image/svg+xml")


@router.delete("/{run_id}", response_model=StatusResponse)
def delete_run(run_id: int, db: Session = Depends(get_db)):
    """Delete a run."""
    _get_run_or_404(db, run_id)
    try:
        RunCRUD.delete(db=db, run_id=run_id)
        return StatusResponse(success=True, message=f"Run {run_id} deleted successfully")
    except Exception as e:
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Failed to delete run: {str(e)}"
        )
