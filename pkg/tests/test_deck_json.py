import hashlib
import json
import random

import pytest

from slideforge.deck.extract import extract_deck
from slideforge.deck.model import DeckExtract, deck_from_json, deck_to_json
from slideforge.deck.ocr import StubOcrEngine, ocr_deck

from deckbuilder import build_pptx, fixture_corpus
from synth import random_deck


def test_empty_deck_json():
    deck = DeckExtract(source_name="empty.pptx", slide_count=0, slides=[])
    doc = json.loads(deck_to_json(deck))
    assert doc == {"source_name": "empty.pptx", "slide_count": 0, "slides": []}


def test_key_order_is_canonical(tmp_path):
    deck, _ = extract_deck(build_pptx(fixture_corpus()["pair"]), "pair.pptx", tmp_path)
    doc = json.loads(deck_to_json(deck))
    assert list(doc.keys()) == ["source_name", "slide_count", "slides"]
    slide_keys = list(doc["slides"][0].keys())
    assert slide_keys[:5] == ["index", "title", "raw_text", "ocr_text", "images"]
    image = doc["slides"][1]["images"][0]
    assert list(image.keys()) == ["id", "path", "ocr_text"]


def test_second_slide_index_is_one(tmp_path):
    deck, _ = extract_deck(build_pptx(fixture_corpus()["pair"]), "pair.pptx", tmp_path)
    doc = json.loads(deck_to_json(deck))
    assert doc["slides"][1]["index"] == 1


def test_round_trip_fixture_corpus(tmp_path):
    for name, slides in fixture_corpus().items():
        data = build_pptx(slides)
        deck, assets = extract_deck(data, f"{name}.pptx", tmp_path / name)
        mapping = {a.content_hash: f"ocr for {a.id}" for a in assets}
        ocr_deck(deck, assets, StubOcrEngine(mapping))
        assert deck_from_json(deck_to_json(deck)) == deck, name


def test_round_trip_randomized_decks():
    rng = random.Random(99)
    for _ in range(200):
        deck = random_deck(rng)
        assert deck_from_json(deck_to_json(deck)) == deck


def test_round_trip_preserves_unicode():
    rng = random.Random(5)
    deck = random_deck(rng)
    text = deck_to_json(deck)
    assert deck_from_json(text) == deck
    # non-ASCII stays readable, not escaped
    if any("デ" in (s.title or "") + s.raw_text for s in deck.slides):
        assert "デ" in text


def test_from_json_rejects_bad_count():
    with pytest.raises(ValueError):
        deck_from_json('{"source_name": "x", "slide_count": 2, "slides": []}')


def test_from_json_rejects_bad_indices():
    doc = {
        "source_name": "x",
        "slide_count": 1,
        "slides": [{"index": 5, "title": None, "raw_text": "", "ocr_text": "", "images": []}],
    }
    with pytest.raises(ValueError):
        deck_from_json(json.dumps(doc))


def test_json_is_utf8_serializable():
    deck = DeckExtract(source_name="デッキ.pptx", slide_count=0, slides=[])
    deck_to_json(deck).encode("utf-8")


def test_ocr_text_round_trips(tmp_path):
    from deckbuilder import SlideSpec, make_png

    png = make_png((12, 34, 56))
    deck, assets = extract_deck(
        build_pptx([SlideSpec(title="T", images=[png])]), "t.pptx", tmp_path
    )
    ocr_deck(deck, assets, StubOcrEngine({hashlib.sha256(png).hexdigest(): "photo text"}))
    restored = deck_from_json(deck_to_json(deck))
    assert restored.slides[0].ocr_text == "photo text"
    assert restored.slides[0].images[0].ocr_text == "photo text"
