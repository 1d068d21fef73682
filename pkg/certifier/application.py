import logging
import sys
from typing import List, Optional

from .cli import parse_args, run
from .utils.analytic import SingularityError
from .utils.circuit import EntanglementError
from .utils.configuration import ConfigError
from .utils.graph import GraphError
from .utils.instances import InstanceError
from .utils.linalg import DomainError, ResourceError

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

logger = logging.getLogger(__name__)


class Application:
    EXIT_OK = 0
    EXIT_FAILED = 1
    EXIT_USAGE = 2

    def __init__(self, argv: Optional[List[str]] = None):
        self.args = parse_args(sys.argv[1:] if argv is None else argv)
        self._configure_logging()

    def _configure_logging(self):
        level = logging.INFO
        if self.args.verbose:
            level = logging.DEBUG
        elif self.args.quiet:
            level = logging.WARNING

        logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)

    def exec(self) -> int:
        try:
            return run(self.args)
        except (ConfigError, DomainError, ResourceError, GraphError) as exc:
            logger.error("%s", exc)
            return Application.EXIT_USAGE
        except (SingularityError, EntanglementError, InstanceError) as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            return Application.EXIT_FAILED
