from .container import DeckArchive, convert_legacy_deck, open_deck
from .extract import ImageAsset, extract_deck, extract_images, extract_slides
from .model import BodyBlock, DeckExtract, SlideImage, SlideRecord, deck_from_json, deck_to_json
from .ocr import DEFAULT_LANGUAGE_HINTS, ExternalOcrEngine, OcrEngine, StubOcrEngine, ocr_deck

__all__ = [
    "BodyBlock",
    "DEFAULT_LANGUAGE_HINTS",
    "DeckArchive",
    "DeckExtract",
    "ExternalOcrEngine",
    "ImageAsset",
    "OcrEngine",
    "SlideImage",
    "SlideRecord",
    "StubOcrEngine",
    "convert_legacy_deck",
    "deck_from_json",
    "deck_to_json",
    "extract_deck",
    "extract_images",
    "extract_slides",
    "ocr_deck",
    "open_deck",
]
