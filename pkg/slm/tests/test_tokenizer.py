import pytest

from geoslm.data import load_examples
from geoslm.tokenizer import BOS, EOS, MARKER, PAD, UNK, Tokenizer, join, scan


def test_scan_join_round_trip_on_calls():
    for text in [
        "AddMarker('University', [-73.1888, 122.889])",
        "MoveToExtent(62.2585, -120.3652, 63.8833, -3.3906)",
        "Cartography('background', 'ivory', null)",
        "ZoomOut(2)",
        "AddVector('point', 'point_zones_NY_kpn.kml')",
    ]:
        assert join(scan(text)) == text


def test_scan_join_round_trip_on_queries():
    for text in [
        "Zoom in by 7 levels to focus on the details.",
        "Can we go to 40.5267, -79.4892?",
        "Show a marker at -4.5, 40 with 'Madrid' as label.",
    ]:
        assert join(scan(text)) == text


def test_digits_tokenize_individually():
    tokens = scan("ZoomIn(42)")
    assert tokens == ["ZoomIn", "(", "4", "2", ")"]


def test_build_is_deterministic_and_case_sensitive():
    texts = ["Draw a line", "Draw('Line')"]
    a = Tokenizer.build(texts)
    b = Tokenizer.build(texts)
    assert a.token_to_id == b.token_to_id
    assert "Draw" in a.token_to_id
    # Spaced and unspaced occurrences are distinct tokens, and case matters.
    assert MARKER + "line" in a.token_to_id and "Line" in a.token_to_id


def test_specials_have_reserved_ids():
    tok = Tokenizer.build(["hello world"])
    assert tok.id_to_token[:4] == [PAD, BOS, EOS, UNK]
    assert tok.pad_id == 0


def test_encode_source_pads_to_exact_length():
    tok = Tokenizer.build(["hello world"], max_len=16)
    ids = tok.encode_source("hello")
    assert len(ids) == 16
    assert ids[1:] == [tok.pad_id] * 15


def test_encode_target_appends_eos():
    tok = Tokenizer.build(["hello world"], max_len=8)
    ids = tok.encode_target("hello world")
    assert ids[2] == tok.eos_id
    assert len(ids) == 8


def test_unknown_tokens_map_to_unk():
    tok = Tokenizer.build(["hello"])
    assert tok.encode_source("mystery")[0] == tok.unk_id


def test_decode_stops_at_eos():
    tok = Tokenizer.build(["hello world"])
    ids = tok.encode_target("hello world")
    assert tok.decode(ids) == "hello world"


def test_whole_dataset_round_trips_and_fits(smoke_dataset):
    examples = load_examples(smoke_dataset / "data.jsonl")
    for e in examples:
        assert join(scan(e.query)) == e.query
        assert join(scan(e.call)) == e.call
        assert len(scan(e.query)) <= 64
        assert len(scan(e.call)) < 64  # EOS still fits


def test_all_encoded_inputs_have_length_64(smoke_dataset):
    examples = load_examples(smoke_dataset / "data.jsonl")
    tok = Tokenizer.build([e.query for e in examples] + [e.call for e in examples])
    for e in examples:
        assert len(tok.encode_source(e.query)) == 64
        assert len(tok.encode_target(e.call)) == 64
