# app/infrastructure/persistence/repositories/__init__.py

from .csv_corpus_repository import CsvCorpusRepository
from .file_resource_repository import FileResourceRepository
from .model_directory_repository import ModelDirectoryRepository
