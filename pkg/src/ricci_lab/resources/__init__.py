from .flows import Flows
from .levels import Levels
from .regions import Regions
from .saddles import Saddles

__all__ = ["Levels", "Flows", "Saddles", "Regions"]
