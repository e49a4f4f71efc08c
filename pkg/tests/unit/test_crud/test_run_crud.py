import pytest
from app.crud.run_crud import RunCRUD
from app.models.run import SolveRun, ConvergencePoint
from app.multicut.solver import solve
from app.schemas.solver import SolveConfig


@pytest.fixture
def triangle_result(triangle_instance):
    return solve(triangle_instance, SolveConfig(tighten="cycles"))


class TestRunCRUD:
    """Test cases for run store access"""

    def test_create_from_result(self, db_session, triangle_instance, triangle_result):
        """Test storing a finished solve"""
        run = RunCRUD.create_from_result(db_session, "triangle.txt", triangle_instance, triangle_result, "cycles")
        assert run.id is not None
        assert run.status == "optimal"
        assert run.node_count == 3
        assert run.edge_count == 3
        assert run.lower_bound == pytest.approx(-1.0)
        assert run.trivial_lower_bound == -2.0
        assert run.iterations == triangle_result.iterations
        assert run.n_triangles == 1
        assert len(run.records) == len(triangle_result.records)

    def test_get_by_id(self, db_session, triangle_instance, triangle_result):
        """Test lookup by id"""
        run = RunCRUD.create_from_result(db_session, "triangle.txt", triangle_instance, triangle_result, "cycles")
        assert RunCRUD.get_by_id(db_session, run.id).instance_name == "triangle.txt"
        assert RunCRUD.get_by_id(db_session, run.id + 100) is None

    def test_get_all_newest_first(self, db_session, triangle_instance, triangle_result):
        """Test listing order"""
        first = RunCRUD.create_from_result(db_session, "a.txt", triangle_instance, triangle_result, "cycles")
        second = RunCRUD.create_from_result(db_session, "b.txt", triangle_instance, triangle_result, "cycles")
        assert [run.id for run in RunCRUD.get_all(db_session)] == [second.id, first.id]

    def test_get_records(self, db_session, triangle_instance, triangle_result):
        """Test records in iteration order"""
        run = RunCRUD.create_from_result(db_session, "triangle.txt", triangle_instance, triangle_result, "cycles")
        records = RunCRUD.get_records(db_session, run.id)
        assert [r.iteration for r in records] == [r.iteration for r in triangle_result.records]
        assert records[-1].lower_bound == pytest.approx(triangle_result.lower_bound)

    def test_delete(self, db_session, triangle_instance, triangle_result):
        """Test deletion and deleting twice"""
        run = RunCRUD.create_from_result(db_session, "triangle.txt", triangle_instance, triangle_result, "cycles")
        assert RunCRUD.delete(db_session, run.id) is True
        assert RunCRUD.delete(db_session, run.id) is False
        assert db_session.query(SolveRun).count() == 0
        assert db_session.query(ConvergencePoint).count() == 0
