# app/infrastructure/metadata/__init__.py