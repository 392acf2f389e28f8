import json
import random
import string
from pathlib import Path

import pytest

from vita.command import parse_command
from vita.errors import OperatorSchemaError, OperatorSyntaxError
from vita.nodes import parse_json, serialize

GOLDEN = Path(__file__).parent / "golden" / "command_json_pairs.json"


def golden_pairs():
    return json.loads(GOLDEN.read_text())


class TestGoldenCorpus:
    def test_has_at_least_30_cases(self):
        assert len(golden_pairs()) >= 30

    @pytest.mark.parametrize("pair", golden_pairs(), ids=lambda p: p["command"][:40])
    def test_surfaces_parse_equal(self, pair):
        from_command = parse_command(pair["command"])
        from_json = parse_json(json.dumps(pair["json"]))
        assert from_command == from_json

    @pytest.mark.parametrize("pair", golden_pairs(), ids=lambda p: p["command"][:40])
    def test_round_trip_through_canonical_json(self, pair):
        node = parse_command(pair["command"])
        assert parse_json(serialize(node)) == node


class TestSyntaxErrors:
    @pytest.mark.parametrize(
        "line,offset_of",
        [
            ("select v1 single token", "token"),  # missing where
            ("coordinate v1 table on x", "table"),  # missing arrow
            ("checkout abc", "abc"),
            ('load "x.csv" reviews', "reviews"),  # missing as
            ("combine Review update", None),  # missing pipeline
        ],
    )
    def test_position_points_at_offender(self, line, offset_of):
        with pytest.raises(OperatorSyntaxError) as exc:
            parse_command(line)
        if offset_of is not None:
            assert exc.value.position == line.index(offset_of)

    def test_expected_token_set_reported(self):
        with pytest.raises(OperatorSyntaxError) as exc:
            parse_command("select v1 maybe where a == 1")
        assert "single" in exc.value.expected

    def test_unterminated_string(self):
        with pytest.raises(OperatorSyntaxError):
            parse_command('select v1 single where a == "oops')

    def test_trailing_garbage(self):
        with pytest.raises(OperatorSyntaxError):
            parse_command("undo undo")

    def test_interval_bounds_validated(self):
        with pytest.raises((OperatorSyntaxError, OperatorSchemaError)):
            parse_command("select v1 interval where x between 5 and 1")


VOCAB = [
    "project", "mutate", "aggregate", "set", "visualize", "combine", "synthesize",
    "select", "coordinate", "load", "undo", "checkout", "clear", "where", "with",
    "as", "text", "between", "and", "in", "contains", "single", "list", "interval",
    "multi", "update", "create", "add", "Review", "tokens", "v1", "table",
    "lowercase", "tfidf", "->", "[", "]", ";", ",", "=", "==", "<=", '"x"', "3",
    "0.5", "-2", "true",
]


class TestFuzzTotality:
    """Any input yields a node or a positioned error; nothing else escapes."""

    def _check(self, line: str):
        try:
            parse_command(line)
        except OperatorSyntaxError as e:
            assert 0 <= e.position <= len(line) + 1
        except OperatorSchemaError:
            pass

    def test_random_character_soup(self):
        rng = random.Random(42)
        alphabet = string.printable
        for _ in range(40_000):
            line = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 30)))
            self._check(line)

    def test_random_token_juxtaposition(self):
        rng = random.Random(43)
        for _ in range(40_000):
            line = " ".join(rng.choice(VOCAB) for _ in range(rng.randrange(0, 10)))
            self._check(line)

    def test_mutated_valid_commands(self):
        rng = random.Random(44)
        seeds = [p["command"] for p in golden_pairs()]
        for _ in range(25_000):
            line = list(rng.choice(seeds))
            for _ in range(rng.randrange(1, 4)):
                if not line:
                    break
                op = rng.randrange(3)
                pos = rng.randrange(len(line))
                if op == 0:
                    line[pos] = rng.choice(string.printable)
                elif op == 1:
                    del line[pos]
                else:
                    line.insert(pos, rng.choice(string.printable))
            self._check("".join(line))
