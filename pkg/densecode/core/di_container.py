from dependency_injector import containers, providers
from densecode.db_connector.sweep_db_connector import SweepDBConnector


class Container(containers.DeclarativeContainer):
    config = providers.Configuration()

    # Checkpoint store singleton - only opened when a sweep asks for checkpointing
    sweep_store = providers.Singleton(
        SweepDBConnector,
        db_url=config.db_url
    )
