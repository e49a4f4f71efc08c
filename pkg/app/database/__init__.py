from .connection import Base, create_database, get_session, get_db 
