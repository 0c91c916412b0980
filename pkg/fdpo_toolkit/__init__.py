from importlib.metadata import version


__version__ = version('fdpo_toolkit')
