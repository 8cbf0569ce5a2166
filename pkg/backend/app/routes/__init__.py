from . import catalog
from . import classify
from . import matroids
from . import presentations
from . import subdivisions
