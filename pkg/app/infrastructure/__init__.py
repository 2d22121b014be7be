# app/infrastructure/__init__.py