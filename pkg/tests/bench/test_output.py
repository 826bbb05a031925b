import pandas as pd

from src.bench.output import format_summary_markdown, mean_sd, summary_rows

SUMMARY = pd.DataFrame(
    {
        "method": ["km", "spmtc-s", "km", "spmtc-s"],
        "task": [0, 0, 1, 1],
        "lambda1": [0.5, 0.25, 0.5, 0.25],
        "l": [2, 4, 2, 4],
        "runs": [20] * 4,
        "acc_mean": [0.6, 0.95, 0.7, 0.9],
        "acc_sd": [0.05, 0.01, 0.04, 0.02],
        "nmi_mean": [0.4, 0.9, 0.5, 0.8],
        "nmi_sd": [0.05, 0.02, 0.04, 0.03],
        "comparable": [False, True, True, True],
    }
)


def test_mean_sd():
    assert mean_sd(0.5, 0.0123456) == "0.5000 ± 0.0123"


def test_comparable_rows_are_marked():
    rows = summary_rows(SUMMARY, 0)
    assert rows[0][4] == "0.6000 ± 0.0500"
    assert rows[1][4] == "**0.9500 ± 0.0100**"
    assert rows[1][1:4] == ["0.25", 4, 20]


def test_markdown_has_one_table_per_task():
    text = format_summary_markdown(SUMMARY, 0.05)
    assert "## Task 0" in text and "## Task 1" in text
    assert "alpha = 0.05" in text
    assert text.count("| Method") == 2
