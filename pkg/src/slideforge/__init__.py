"""slideforge: slide decks in, customized Markdown textbooks out."""

__version__ = "0.1.0"
