from ._logs import setup_logging as setup_logging
from ._utils import quote as quote
from ._utils import is_dict as is_dict
from ._utils import is_mapping as is_mapping
from ._utils import human_join as human_join
from ._utils import coerce_float as coerce_float
from ._utils import parse_floats as parse_floats
from ._utils import coerce_integer as coerce_integer
from ._utils import parse_index_set as parse_index_set
from ._utils import format_index_set as format_index_set
from ._parallel import parallel_map as parallel_map
