import logging

from fastapi import FastAPI

from densecode.core.correlations import DISCORD_STARTS
from densecode.core.di_container import Container


DEFAULT_THREADS = 4
DEFAULT_DB_URL = "sqlite:///densecode_sweeps.db"
DEFAULT_LOG_LEVEL = "INFO"


def configure_logging(level: str = DEFAULT_LOG_LEVEL):
    logging.basicConfig(level=level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")


class DenseCodeApp(FastAPI):

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.container = self.init_services()
        configure_logging(self.container.config.log_level() or DEFAULT_LOG_LEVEL)
        self.logger = logging.getLogger(__name__)
        self.logger.info(f"Dense coding service ready with {self.container.config.threads()} sweep threads")

    @staticmethod
    def init_services() -> Container:
        container = Container()

        # Configure each config attribute individually
        container.config.threads.from_env('DENSECODE_THREADS', as_=int, default=DEFAULT_THREADS)
        container.config.db_url.from_env('DENSECODE_DB_URL', default=DEFAULT_DB_URL)
        container.config.log_level.from_env('DENSECODE_LOG_LEVEL', default=None)
        container.config.discord_starts.from_env('DENSECODE_DISCORD_STARTS', as_=int, default=DISCORD_STARTS)

        if container.config.threads() < 1:
            raise ValueError(f"DENSECODE_THREADS must be at least 1, got {container.config.threads()}")
        if container.config.discord_starts() < 1:
            raise ValueError(f"DENSECODE_DISCORD_STARTS must be at least 1, got {container.config.discord_starts()}")

        container.wire(modules=[__name__, "densecode.core.sweep"])
        return container
