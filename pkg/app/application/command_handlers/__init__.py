from .corpus_command_handlers import CorpusCommandHandler
from .model_command_handlers import ModelCommandHandler
from .report_command_handlers import ReportCommandHandler
