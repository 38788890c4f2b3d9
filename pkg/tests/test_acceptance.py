"""Gate suite: one test per criterion, one printed verdict line each.

Every check runs on a frozen master seed and pinned tolerances, so these
results are reproducible bit for bit within one build.  Run with -s to see
the verdict lines as they complete.
"""

from hammingperc import acceptance


def _check(result):
    print(result.line())
    assert result.passed, result.line()


def test_criterion_01_small_graph_exact_agreement():
    _check(acceptance.criterion_1_small_graph_exact())


def test_criterion_02_progeny_mass_vs_extinction():
    _check(acceptance.criterion_2_progeny_mass())


def test_criterion_03_near_critical_tail_band():
    _check(acceptance.criterion_3_tail_band())


def test_criterion_04_survival_asymptotic_band():
    _check(acceptance.criterion_4_survival_asymptotic())


def test_criterion_05_largest_component_lln():
    _check(acceptance.criterion_5_giant_lln())


def test_criterion_06_cluster_tail_vs_survival():
    _check(acceptance.criterion_6_cluster_tail())


def test_criterion_07_two_round_merge():
    _check(acceptance.criterion_7_sprinkling())


def test_criterion_08_good_line_coverage():
    _check(acceptance.criterion_8_good_lines())


def test_criterion_09_subcritical_mean_cluster_size():
    _check(acceptance.criterion_9_subcritical_chi())


def test_criterion_10_critical_window_scale():
    _check(acceptance.criterion_10_critical_window())


def test_criterion_11_concentration():
    _check(acceptance.criterion_11_concentration())
