from .fileformat import Structure, StructureError, parse, serialize
from .main import main, run

__all__ = ["Structure", "StructureError", "parse", "serialize", "main", "run"]
