# app/infrastructure/persistence/__init__.py