from sqlalchemy.orm import Session
from typing import List, Optional
from app.models.run import SolveRun, ConvergencePoint
from app.multicut.instance import MulticutInstance
from app.multicut.solver import SolveResult


class RunCRUD:
    @staticmethod
    def create_from_result(db: Session, instance_name: str, instance: MulticutInstance,
                           result: SolveResult, tighten: str) -> SolveRun:
        """Store a finished solve together with its convergence records."""
        counts = result.counts
        run = SolveRun(
            instance_name=instance_name,
            node_count=instance.node_count,
            edge_count=instance.edge_count,
            tighten=tighten,
            status=result.status,
            lower_bound=result.lower_bound,
            upper_bound=result.upper_bound,
            trivial_lower_bound=result.trivial_lower_bound,
            iterations=result.iterations,
            n_triangles=counts["triangles"],
            n_lollipops=counts["lollipops"],
        )
        run.records = [ConvergencePoint(**record.model_dump()) for record in result.records]
        db.add(run)
        db.commit()
        db.refresh(run)
        return run

    @staticmethod
    def get_by_id(db: Session, run_id: int) -> Optional[SolveRun]:
        """Get run by ID."""
        return db.query(SolveRun).filter(SolveRun.id == run_id).first()

    @staticmethod
    def get_all(db: Session) -> List[SolveRun]:
        """Get all runs, newest first."""
        return db.query(SolveRun).order_by(SolveRun.id.desc()).all()

    @staticmethod
    def get_records(db: Session, run_id: int) -> List[ConvergencePoint]:
        """Get the convergence records of a run in iteration order."""
        return (db.query(ConvergencePoint)
                .filter(ConvergencePoint.run_id == run_id)
                .order_by(ConvergencePoint.iteration)
                .all())

    @staticmethod
    def delete(db: Session, run_id: int) -> bool:
        """Delete a run and its records."""
        run = db.query(SolveRun).filter(SolveRun.id == run_id).first()
        if run:
            db.delete(run)
            db.commit()
            return True
        return False
