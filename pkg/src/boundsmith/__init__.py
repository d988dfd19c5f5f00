"""boundsmith: a bounded relational model finder that enumerates scenarios
staged by size and by active signature."""

__version__ = "0.1.0"
