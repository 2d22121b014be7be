# app/domain/entities/__init__.py