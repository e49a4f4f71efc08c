import pytest
from sqlalchemy import inspect
from app.models.run import SolveRun, ConvergencePoint


def make_run(**overrides):
    values = dict(
        instance_name="triangle.txt", node_count=3, edge_count=3, tighten="cycles",
        status="optimal", lower_bound=-1.0, upper_bound=-1.0, trivial_lower_bound=-2.0,
        iterations=11, n_triangles=1, n_lollipops=0,
    )
    values.update(overrides)
    return SolveRun(**values)


class TestSolveRunModel:
    """Test cases for SolveRun model"""

    def test_run_creation(self):
        """Test basic SolveRun creation"""
        run = make_run()
        assert run.instance_name == "triangle.txt"
        assert run.status == "optimal"
        assert run.id is None  # Not assigned until persisted
        assert run.records == []

    def test_run_repr(self):
        """Test SolveRun string representation"""
        assert repr(make_run()) == "<SolveRun(id=None, instance='triangle.txt', status='optimal')>"

    def test_persisted_run_gets_defaults(self, db_session):
        """Test server defaults after commit"""
        run = make_run()
        db_session.add(run)
        db_session.commit()
        db_session.refresh(run)
        assert run.id is not None
        assert run.created_at is not None

    def test_table_columns(self):
        """Test the run table layout"""
        columns = {column.name for column in inspect(SolveRun).columns}
        assert {"lower_bound", "upper_bound", "trivial_lower_bound", "n_lollipops", "created_at"} <= columns


class TestConvergencePointModel:
    """Test cases for ConvergencePoint model"""

    def test_points_ordered_by_iteration(self, db_session):
        """Test the relationship ordering"""
        run = make_run()
        for iteration in (2, 0, 1):
            run.records.append(ConvergencePoint(
                wall_time=0.1 * iteration, iteration=iteration, lower_bound=-2.0 + iteration,
                best_upper_bound=-1.0, n_edges=3, n_triangles=1, n_lollipops=0,
            ))
        db_session.add(run)
        db_session.commit()
        db_session.expire_all()
        stored = db_session.query(SolveRun).first()
        assert [point.iteration for point in stored.records] == [0, 1, 2]

    def test_delete_cascades(self, db_session):
        """Test that deleting a run removes its points"""
        run = make_run()
        run.records.append(ConvergencePoint(wall_time=0.0, iteration=0, lower_bound=-2.0, best_upper_bound=-1.0,
                                            n_edges=3, n_triangles=0, n_lollipops=0))
        db_session.add(run)
        db_session.commit()
        db_session.delete(run)
        db_session.commit()
        assert db_session.query(ConvergencePoint).count() == 0

    def test_point_repr(self):
        """Test ConvergencePoint string representation"""
        point = ConvergencePoint(run_id=3, iteration=7)
        assert repr(point) == "<ConvergencePoint(run_id=3, iteration=7)>"

    def test_columns_match_record_fields(self):
        """Test that every convergence record field has a column of the same name"""
        from app.schemas.solver import ConvergenceRecord

        columns = {column.name for column in inspect(ConvergencePoint).columns}
        assert set(ConvergenceRecord.model_fields) == columns - {"id", "run_id"}
