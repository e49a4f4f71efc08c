from .run_crud import RunCRUD
