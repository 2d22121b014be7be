# app/container/container.py
from app.application.command_handlers.corpus_command_handlers import CorpusCommandHandler
from app.application.command_handlers.model_command_handlers import ModelCommandHandler
from app.application.command_handlers.report_command_handlers import ReportCommandHandler
from app.config.settings import settings
from app.domain.repositories.corpus_repository import ICorpusRepository
from app.domain.repositories.model_repository import IModelRepository
from app.domain.repositories.resource_repository import IResourceRepository
from app.infrastructure.persistence.repositories.csv_corpus_repository import CsvCorpusRepository
from app.infrastructure.persistence.repositories.file_resource_repository import FileResourceRepository
from app.infrastructure.persistence.repositories.model_directory_repository import ModelDirectoryRepository


class Container:
    def __init__(self, resources_dir=None):
        # Repositories
        self.corpus_repository: ICorpusRepository = CsvCorpusRepository()
        self.resource_repository: IResourceRepository = FileResourceRepository(
            resources_dir=resources_dir or settings.RESOURCES_DIR
        )
        self.model_repository: IModelRepository = ModelDirectoryRepository()

        # Command handlers
        self.corpus_command_handler = CorpusCommandHandler(
            corpus_repository=self.corpus_repository,
            resource_repository=self.resource_repository,
        )
        self.model_command_handler = ModelCommandHandler(
            corpus_repository=self.corpus_repository,
            resource_repository=self.resource_repository,
            model_repository=self.model_repository,
        )
        self.report_command_handler = ReportCommandHandler()


# Create a single instance of our container
container = Container()
