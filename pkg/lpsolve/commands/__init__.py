"""
Command handlers

Each handler module owns a CommandRouter and registers one function per
command name. The CLI merges the routers and dispatches a CommandConfig to the
matching handler.
"""
import logging
from typing import Any, Callable, Dict, Optional

from pydantic import ValidationError

from lpsolve.config import settings
from lpsolve.errors import LpSolveError, UsageError
from lpsolve.models import CommandConfig, CommandName, CommandOutput

logger = logging.getLogger(__name__)

Handler = Callable[[CommandConfig], CommandOutput]


class CommandRouter:
    """Maps command names to handler functions"""

    def __init__(self):
        self.routes: Dict[CommandName, Handler] = {}

    def command(self, name: CommandName):
        """Decorator registering a handler"""

        def register(func: Handler) -> Handler:
            if name in self.routes:
                raise ValueError(f"command {name.value} registered twice")
            self.routes[name] = func
            return func

        return register

    def include_router(self, other: "CommandRouter"):
        for name, func in other.routes.items():
            self.command(name)(func)

    def dispatch(self, config: CommandConfig) -> CommandOutput:
        handler = self.routes.get(config.command)
        if handler is None:
            raise UsageError(f"no handler for command {config.command.value}")
        try:
            return handler(config)
        except LpSolveError:
            raise
        except ValidationError as e:
            first = e.errors()[0]
            logger.error(f"Invalid options for {config.command.value}: {first['msg']}")
            raise UsageError(f"invalid option: {first['msg']}", operation=config.command.value) from e


def span_tol(config: CommandConfig) -> float:
    """--tol, else LPSOLVE_TOL"""
    return config.tol if config.tol is not None else settings.TOL


def meta(
    case: Optional[str] = None,
    iterations: Optional[int] = None,
    converged: Optional[bool] = None,
    **extra: Any,
) -> Dict[str, Any]:
    """Metadata block; case, iterations and converged are always present"""
    out: Dict[str, Any] = {"case": case, "iterations": iterations, "converged": converged}
    out.update(extra)
    return out
