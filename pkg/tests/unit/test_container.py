from app.application.command_handlers import CorpusCommandHandler, ModelCommandHandler, ReportCommandHandler
from app.config.settings import settings
from app.container.container import Container, container
from app.infrastructure.persistence.repositories.csv_corpus_repository import CsvCorpusRepository
from app.infrastructure.persistence.repositories.file_resource_repository import FileResourceRepository
from app.infrastructure.persistence.repositories.model_directory_repository import ModelDirectoryRepository


def test_container_dependencies():
    assert isinstance(container.corpus_repository, CsvCorpusRepository)
    assert isinstance(container.resource_repository, FileResourceRepository)
    assert isinstance(container.model_repository, ModelDirectoryRepository)
    assert isinstance(container.corpus_command_handler, CorpusCommandHandler)
    assert isinstance(container.model_command_handler, ModelCommandHandler)
    assert isinstance(container.report_command_handler, ReportCommandHandler)


def test_container_handlers_share_repositories():
    wired = Container()
    assert wired.corpus_command_handler.corpus_repository is wired.corpus_repository
    assert wired.model_command_handler.resource_repository is wired.resource_repository
    assert wired.model_command_handler.model_repository is wired.model_repository


def test_container_resources_dir(tmp_path):
    assert Container().resource_repository.resources_dir == settings.RESOURCES_DIR
    assert Container(resources_dir=tmp_path).resource_repository.resources_dir == tmp_path
