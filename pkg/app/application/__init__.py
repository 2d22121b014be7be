# app/application/__init__.py