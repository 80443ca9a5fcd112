import json

import pytest

from slideforge.cli import cli_main
from slideforge.deck.model import deck_from_json
from slideforge.textbook.quality import format_lint, keyword_coverage

from deckbuilder import build_pptx, fixture_corpus


@pytest.fixture
def fixture_file(tmp_path):
    path = tmp_path / "fixture.pptx"
    path.write_bytes(build_pptx(fixture_corpus()["ten"]))
    return path


def test_extract_writes_canonical_json(fixture_file, tmp_path, capsys):
    out = tmp_path / "deck.json"
    assert cli_main(["extract", str(fixture_file), "-o", str(out)]) == 0
    doc = deck_from_json(out.read_text(encoding="utf-8"))
    assert doc.slide_count == 10
    assert list(json.loads(out.read_text())) == ["source_name", "slide_count", "slides"]
    assert "extracted 10 slides" in capsys.readouterr().out


def test_extract_missing_file_exit_1(tmp_path, capsys):
    assert cli_main(["extract", str(tmp_path / "absent.pptx"), "-o", str(tmp_path / "o.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_unknown_flag_exit_2(fixture_file, tmp_path):
    assert cli_main(["extract", str(fixture_file), "-o", str(tmp_path / "o.json"),
                     "--frobnicate"]) == 2


def test_no_command_exit_2():
    assert cli_main([]) == 2


def test_generate_with_stubs_lints_clean(fixture_file, tmp_path):
    out = tmp_path / "book.md"
    code = cli_main([
        "generate", str(fixture_file),
        "--language", "en", "--style", "academic", "--difficulty", "introductory",
        "--model", "stub-echo", "-o", str(out),
    ])
    assert code == 0
    book = out.read_text(encoding="utf-8")
    assert format_lint(book) == []
    assert book.startswith("# ")


def test_generate_from_deck_json(fixture_file, tmp_path):
    deck_json = tmp_path / "deck.json"
    assert cli_main(["extract", str(fixture_file), "-o", str(deck_json)]) == 0
    out = tmp_path / "book.md"
    assert cli_main(["generate", str(deck_json), "--model", "stub-echo",
                     "-o", str(out)]) == 0
    book = out.read_text(encoding="utf-8")
    assert format_lint(book) == []
    deck = deck_from_json(deck_json.read_text(encoding="utf-8"))
    assert keyword_coverage(book, deck) >= 0.9


def test_generate_unknown_model_exit_1(fixture_file, tmp_path, capsys):
    code = cli_main(["generate", str(fixture_file), "--model", "gpt-ghost",
                     "-o", str(tmp_path / "b.md")])
    assert code == 1
    assert "not registered" in capsys.readouterr().err


def test_kb_add_then_generate_with_references(fixture_file, tmp_path):
    doc = tmp_path / "notes.md"
    doc.write_text(
        "# Transformation primer\n\n"
        "Digital transformation succeeds when platform teams align infrastructure "
        "work with business outcomes. "
        "Cloud migration strategy should sequence systems by risk and value. "
        "Observability baselines make incident response playbooks actionable.\n",
        encoding="utf-8",
    )
    kb_dir = tmp_path / "kb"
    assert cli_main(["kb", "add", str(doc), "--kb", str(kb_dir), "--title", "Primer"]) == 0
    assert (kb_dir / "index.sfix").exists()

    out = tmp_path / "book.md"
    assert cli_main(["generate", str(fixture_file), "--kb", str(kb_dir),
                     "--model", "stub-echo", "-o", str(out)]) == 0
    book = out.read_text(encoding="utf-8")
    assert format_lint(book) == []
    assert "**Primer**" in book  # local reference cited in the bibliography
    assert "relevance: 0." in book


def test_kb_add_accumulates(tmp_path):
    kb_dir = tmp_path / "kb"
    for i in range(2):
        doc = tmp_path / f"d{i}.txt"
        doc.write_text(f"Document number {i} about digital platforms and rollouts.")
        assert cli_main(["kb", "add", str(doc), "--kb", str(kb_dir)]) == 0
    from slideforge.kb.index import VectorIndex

    index = VectorIndex.load(kb_dir / "index.sfix")
    assert len(index) >= 2


def test_config_file_stub_search(tmp_path, fixture_file):
    config = tmp_path / "conf.json"
    config.write_text(json.dumps({
        "search": {"kind": "stub", "stub_results": [
            {"title": "DX Portal", "url": "https://dx.example/portal",
             "snippet": "A portal about transformation."},
        ]},
    }))
    out = tmp_path / "book.md"
    code = cli_main(["--config", str(config), "generate", str(fixture_file),
                     "--model", "stub-echo", "-o", str(out)])
    assert code == 0
    book = out.read_text(encoding="utf-8")
    assert "https://dx.example/portal" in book
    assert format_lint(book) == []
