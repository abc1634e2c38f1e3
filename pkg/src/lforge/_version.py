__version__ = "0.1.0"
# bump when level construction or output formats change; keys the level cache
ENGINE_VERSION = "lforge-0.1.0"
