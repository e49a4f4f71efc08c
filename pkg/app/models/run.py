from sqlalchemy import Column, Integer, String, Float, DateTime, ForeignKey
from sqlalchemy.orm import relationship
from sqlalchemy.sql import func
from app.database.connection import Base


class SolveRun(Base):
    __tablename__ = "solve_runs"

    id = Column(Integer, primary_key=True, index=True)
    instance_name = Column(String(255), nullable=False)
    node_count = Column(Integer, nullable=False)
    edge_count = Column(Integer, nullable=False)
    tighten = Column(String(32), nullable=False)
    status = Column(String(16), nullable=False)
    lower_bound = Column(Float, nullable=False)
    upper_bound = Column(Float, nullable=False)
    trivial_lower_bound = Column(Float, nullable=False)
    iterations = Column(Integer, nullable=False, default=0)
    n_triangles = Column(Integer, nullable=False, default=0)
    n_lollipops = Column(Integer, nullable=False, default=0)
    created_at = Column(DateTime, server_default=func.now())

    # Relationships
    records = relationship("ConvergencePoint", back_populates="run",
                           cascade="all, delete-orphan", order_by="ConvergencePoint.iteration")

    def __repr__(self):
        return f"<SolveRun(id={self.id}, instance='{self.instance_name}', status='{self.status}')>"


class ConvergencePoint(Base):
    __tablename__ = "convergence_points"

    id = Column(Integer, primary_key=True, index=True)
    wall_time = Column(Float, nullable=False)
    iteration = Column(Integer, nullable=False)
    lower_bound = Column(Float, nullable=False)
    best_upper_bound = Column(Float, nullable=False)
    n_edges = Column(Integer, nullable=False)
    n_triangles = Column(Integer, nullable=False)
    n_lollipops = Column(Integer, nullable=False)

    # Foreign Keys
    run_id = Column(Integer, ForeignKey("solve_runs.id"), nullable=False)

    # Relationships
    run = relationship("SolveRun", back_populates="records")

    def __repr__(self):
        return f"<ConvergencePoint(run_id={self.run_id}, iteration={self.iteration})>"
