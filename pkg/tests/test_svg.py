import numpy as np

from core import svg


def test_bar_chart_draws_one_rect_per_value(tmp_path):
    path = svg.bar_chart(tmp_path / "bars.svg", [3, 1, 2], "multiplicities", "class", "count")
    text = path.read_text()
    assert text.startswith("<svg")
    assert text.count('fill="#1f77b4"') == 3


def test_titles_are_escaped(tmp_path):
    text = svg.line_chart(tmp_path / "line.svg", [1, 2, 3], [0.5, 0.1, 0.01], "ratio <log>").read_text()
    assert "ratio &lt;log&gt;" in text
    assert "<log>" not in text


def test_scatter_draws_duplicate_points_once(tmp_path):
    points = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 2.0], [1.0, 2.0]])
    text = svg.scatter_chart(tmp_path / "pca.svg", points, [1, 1, 1, 7], "pca").read_text()
    assert text.count("<circle") == 3
    assert ">7<" in text


def test_histogram_skips_empty_bins(tmp_path):
    series = {"Inv_1": [(0.0, 1.0, 4), (1.0, 2.0, 0)], "random": [(0.0, 1.0, 1), (1.0, 2.0, 2)]}
    text = svg.histogram_chart(tmp_path / "hist.svg", series, "eigenvalues").read_text()
    assert text.count('fill-opacity="0.6"') == 3
    assert ">Inv_1<" in text and ">random<" in text


def test_barcode_levels(tmp_path):
    text = svg.barcode_chart(tmp_path / "code.svg", [0.0, 1.0, 2.0], "saliency").read_text()
    assert "rgb(0,0,0)" in text
    assert "rgb(255,255,255)" in text
    assert "rgb(128,128,128)" in text
