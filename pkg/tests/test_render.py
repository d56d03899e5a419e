import math
import xml.etree.ElementTree as ET
from fractions import Fraction

import numpy as np
import pytest

from entagg import InputError, cod_matrix, entropy_agglomeration, leaf_order
from entagg.agglomeration import dendrogram_from_merges
from entagg.partitions import GroundSet, pairwise_occurrence_matrix
from entagg.render import RenderSpec, display_leaves, format_value, render_dendrogram, render_matrix

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def e3_tree(e3):
    return entropy_agglomeration(e3)


class TestDendrogram:
    def test_spec_validation(self):
        with pytest.raises(InputError):
            RenderSpec(precision=0)
        with pytest.raises(InputError):
            RenderSpec(format="png")

    def test_collapsed_leaves(self, e3_tree):
        labels = [lab for _, lab in display_leaves(e3_tree, RenderSpec("svg", True))]
        assert labels == ["{1,3,6}", "7", "2", "{4,5}"]

    def test_collapsed_text(self, e3_tree):
        out = render_dendrogram(e3_tree, RenderSpec("text", True))
        assert out.splitlines() == [
            "[0.877654]",
            "  [0.391138]",
            "    [0.187445]",
            "      {1,3,6}",
            "      7",
            "    2",
            "  {4,5}",
        ]

    def test_full_text_has_every_leaf(self, e3_tree):
        out = render_dendrogram(e3_tree, RenderSpec("text", precision=3))
        leaves = [line.strip() for line in out.splitlines() if not line.strip().startswith("[")]
        assert leaves == ["1", "3", "6", "7", "2", "4", "5"]
        assert "[0.391]" in out

    def test_collapsed_newick(self, e3_tree):
        out = render_dendrogram(e3_tree, RenderSpec("newick", True))
        assert out == "((('{1,3,6}',7):0.187445,2):0.391138,'{4,5}'):0.877654;\n"

    def test_two_leaf_newick(self):
        d = dendrogram_from_merges(GroundSet(2), [(1, 2, 0.5)])
        assert render_dendrogram(d, RenderSpec("newick")) == "(1,2):0.500000;\n"

    def test_svg_is_valid_and_collapsed(self, e3_tree):
        out = render_dendrogram(e3_tree, RenderSpec("svg", True))
        root = ET.fromstring(out)
        assert root.tag == SVG + "svg"
        texts = [t.text for t in root.iter(SVG + "text")]
        assert "{1,3,6}" in texts and "{4,5}" in texts
        assert "1" not in texts
        assert "entropy (nats)" in texts

    def test_svg_axis_spans_root_height(self, e3_tree):
        root = ET.fromstring(render_dendrogram(e3_tree, RenderSpec("svg")))
        ticks = [t.text for t in root.iter(SVG + "text") if t.text and t.text[0].isdigit() and "." in t.text]
        assert ticks[0] == "0.000" and float(ticks[-1]) == pytest.approx(0.878, abs=1e-3)

    def test_svg_all_zero_heights(self):
        d = dendrogram_from_merges(GroundSet(3), [(1, 2, 0.0), (4, 3, 0.0)])
        ET.fromstring(render_dendrogram(d, RenderSpec("svg")))

    @pytest.mark.parametrize("fmt", ["text", "newick", "svg"])
    def test_deterministic(self, e3, fmt):
        a = render_dendrogram(entropy_agglomeration(e3), RenderSpec(fmt, True))
        b = render_dendrogram(entropy_agglomeration(e3), RenderSpec(fmt, True))
        assert a.encode() == b.encode()

    def test_label_escaping(self):
        d = dendrogram_from_merges(GroundSet(2, ["a<b", "c&d"]), [(1, 2, 0.1)])
        out = render_dendrogram(d, RenderSpec("svg"))
        assert "a&lt;b" in out and "c&amp;d" in out
        ET.fromstring(out)


class TestMatrix:
    def test_cod_csv_exact(self, z1):
        out = render_matrix(cod_matrix(z1, range(1, 8)))
        assert out == "1\n2,0\n2,1,0\n3,1,0,0\n3,2,0,0,0\n3,2,1,0,0,0\n3,2,1,1,0,0,0\n"

    def test_cod_rejects_order(self, z1):
        with pytest.raises(InputError):
            render_matrix(cod_matrix(z1, range(1, 8)), order=range(1, 8))

    def test_pairwise_ordered(self, e3):
        order = leaf_order(entropy_agglomeration(e3))
        out = render_matrix(pairwise_occurrence_matrix(e3), order, precision=3)
        rows = [r.split(",") for r in out.splitlines()]
        i, j = order.index(4), order.index(5)
        assert abs(i - j) == 1
        assert rows[i][j] == rows[j][i] == rows[i][i] == rows[j][j] == "1"

    def test_identity_order(self, e3):
        m = pairwise_occurrence_matrix(e3)
        assert render_matrix(m, range(1, 8)) == render_matrix(m)

    def test_order_mismatch(self, e3):
        with pytest.raises(InputError):
            render_matrix(pairwise_occurrence_matrix(e3), [1, 2, 3])

    def test_labels_header(self):
        m = [[Fraction(1), Fraction(1, 2)], [Fraction(1, 2), Fraction(1)]]
        out = render_matrix(m, [2, 1], labels=["a", "b"], precision=2)
        assert out == ",b,a\nb,1,0.50\na,0.50,1\n"

    def test_svg_heat_map(self, e3):
        out = render_matrix(pairwise_occurrence_matrix(e3), fmt="svg")
        rects = list(ET.fromstring(out).iter(SVG + "rect"))
        assert len(rects) == 49
        assert rects[0].get("fill") == "rgb(0,0,0)"

    def test_unknown_format(self, e3):
        with pytest.raises(InputError):
            render_matrix(pairwise_occurrence_matrix(e3), fmt="png")

    def test_format_value(self):
        assert format_value(np.int64(3)) == "3"
        assert format_value(Fraction(6, 3)) == "2"
        assert format_value(Fraction(1, 3), 3) == "0.333"
        assert format_value(-1e-20, 2) == "0.00"
        assert format_value(math.pi, 4) == "3.1416"
