# app/domain/repositories/__init__.py

from .corpus_repository import ICorpusRepository
from .resource_repository import IResourceRepository
from .model_repository import IModelRepository
