from .config import *
from .exceptions import *
from .models import *
from .session import *
from .structure import *
from .vcover import *
from .metrics import *
from .results import *
from .orient import *
from .sorting import *
from .learn import *
from .adversaries import *
from .generators import *
from .threads import *
from .batch import *
from .aggregate import *
