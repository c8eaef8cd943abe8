from types import SimpleNamespace
from unittest.mock import patch

import pytest

from train_track_builder.core.ui import format_time, print_header, render_report, show_summary, verdict_style


class TestFormatting:
    @pytest.mark.parametrize(
        "seconds, expected",
        [(-1, "--"), (0.25, "250 ms"), (1.5, "1.50 s"), (59.994, "59.99 s"), (61.25, "1m 01.2s"), (600, "10m 00.0s")],
    )
    def test_format_time(self, seconds, expected):
        assert format_time(seconds) == expected

    @pytest.mark.parametrize("verdict, style", [("YES", "bold green"), ("NO", "bold yellow"), (None, "cyan")])
    def test_verdict_style(self, verdict, style):
        assert verdict_style(verdict) == style


class TestRendering:
    def test_print_header(self):
        with patch("train_track_builder.core.ui.console.print") as mock_print:
            print_header()
            assert mock_print.called

    def test_render_report(self):
        report = SimpleNamespace(
            command="hyperbolic",
            result={"verdict": "NO", "witness": "abAB", "classes": [1, 2]},
            elapsed=0.5,
            exit_code=2,
        )
        with patch("train_track_builder.core.ui.console.print") as mock_print:
            render_report(report)
            assert mock_print.call_count == 1

    def test_show_summary(self):
        rows = [
            {"automorphism": "a->ab; b->bab", "status": "ok", "i": "1", "j": "1", "violations": []},
            {"automorphism": "a->b; b->a", "status": "ok", "i": "0", "j": "0"},
        ]
        with patch("train_track_builder.core.ui.console.print") as mock_print:
            show_summary(rows)
            assert mock_print.called
