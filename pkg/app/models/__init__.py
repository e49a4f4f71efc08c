from .run import SolveRun, ConvergencePoint
