"""
对称函数测试
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from app.core.exceptions import DivergenceError, InputError
from app.services.symfunc import (
    EMPTY,
    Partition,
    SeriesTruncation,
    Specialization,
    cauchy_H,
    cauchy_series,
    cauchy_tail_bound,
    degree_series,
    even_conjugate_indicator,
    h,
    h_o,
    h_o_series,
    h_o_tail_bound,
    h_values,
    partitions_of,
    partitions_up_to,
    pf_Z,
    schur,
    schur_Z,
    series_tail_bound,
    skew_schur,
    subpartitions,
    tableau_schur,
    tau_direct,
    tau_pf,
    union_spec,
)
from app.services.schur_process import SchurSpec

F = Fraction

proper = st.fractions(min_value=F(-3, 4), max_value=F(3, 4), max_denominator=5)
specializations = st.lists(proper, min_size=1, max_size=3).map(lambda xs: Specialization(tuple(xs)))


class TestPartition:
    def test_trailing_zeros_dropped(self):
        assert Partition.of(3, 1, 0, 0) == Partition.of(3, 1)

    def test_rejects_increasing(self):
        with pytest.raises(InputError):
            Partition.of(1, 2)

    def test_conjugate(self):
        assert Partition.of(3, 1).conjugate() == Partition.of(2, 1, 1)
        assert EMPTY.conjugate() == EMPTY

    def test_shifted_coordinates(self):
        assert Partition.of(2, 1).shifted(3) == (1, -1, -3)

    def test_even_conjugate(self):
        assert Partition.of(2, 2, 1, 1).has_even_conjugate()
        assert not Partition.of(2, 1).has_even_conjugate()

    def test_counts(self):
        assert len(list(partitions_of(5))) == 7
        assert len(list(partitions_up_to(4))) == 12
        assert len(list(subpartitions(Partition.of(2, 1)))) == 5

    def test_part_beyond_length_is_zero(self):
        assert Partition.of(2).part(3) == 0


class TestCompleteHomogeneous:
    def test_h2_two_variables(self):
        rho = Specialization.of(F(1, 2), F(1, 3))
        assert h(rho, 2) == F(19, 36)

    def test_negative_index_is_zero(self):
        assert h(Specialization.of(F(1, 2)), -1) == 0

    def test_empty_specialization(self):
        assert h_values(Specialization(), 3) == (1, 0, 0, 0)

    def test_union_adds_variables(self):
        r = union_spec(Specialization.of(F(1, 2)), Specialization.of(F(1, 3)))
        assert r.variables == (F(1, 2), F(1, 3))
        assert r.power_sum(2) == F(1, 4) + F(1, 9)


class TestSchur:
    def test_two_variable_values(self):
        x, y = F(1, 2), F(1, 3)
        rho = Specialization.of(x, y)
        assert schur(Partition.of(1, 1), rho) == x * y
        assert schur(Partition.of(2), rho) == x * x + x * y + y * y
        assert skew_schur(Partition.of(2, 1), Partition.of(1), rho) == (x + y) ** 2

    def test_not_contained_is_zero(self):
        rho = Specialization.of(F(1, 2))
        assert skew_schur(Partition.of(1), Partition.of(2), rho) == 0

    def test_too_many_rows_vanish(self):
        assert schur(Partition.of(1, 1), Specialization.of(F(1, 2))) == 0

    def test_explicit_order_too_small(self):
        with pytest.raises(InputError):
            skew_schur(Partition.of(1, 1, 1), EMPTY, Specialization.of(F(1, 2)), N=2)

    @hsettings(max_examples=15, deadline=None)
    @given(specializations)
    def test_jacobi_trudi_matches_tableaux(self, rho):
        for la in partitions_up_to(5):
            for mu in subpartitions(la):
                assert skew_schur(la, mu, rho) == tableau_schur(la, mu, rho)


class TestTau:
    @hsettings(max_examples=10, deadline=None)
    @given(specializations)
    def test_pfaffian_formula_matches_direct_sum(self, rho):
        for la in partitions_up_to(5):
            assert tau_pf(la, rho) == tau_direct(la, rho)

    def test_single_variable_power(self):
        a = F(2, 3)
        rho = Specialization.of(a)
        for la in partitions_up_to(7):
            exponent = sum(la.part(i) * (-1) ** (i + 1) for i in range(1, la.length + 1))
            assert tau_direct(la, rho) == a**exponent

    def test_padding_size_is_validated(self):
        with pytest.raises(InputError):
            tau_pf(Partition.of(1, 1, 1), Specialization.of(F(1, 2)), two_n=2)

    def test_padding_does_not_change_value(self):
        rho = Specialization.of(F(1, 2), F(-1, 3))
        la = Partition.of(3, 1)
        assert tau_pf(la, rho, two_n=4) == tau_pf(la, rho)

    def test_even_conjugate_indicator(self):
        for ka in partitions_up_to(6):
            assert even_conjugate_indicator(ka, 3) == int(ka.has_even_conjugate())


class TestCauchy:
    def test_cauchy_product(self):
        value = cauchy_H(Specialization.of(F(1, 2)), Specialization.of(F(1, 3), F(1, 5)))
        assert value == F(4, 3)

    def test_divergent_product(self):
        with pytest.raises(DivergenceError):
            cauchy_H(Specialization.of(2), Specialization.of(F(1, 2)))

    @pytest.mark.parametrize("degree", [4, 8, 10])
    def test_truncation_within_tail_bound(self, degree):
        r1 = Specialization.of(F(1, 3), F(1, 4))
        r2 = Specialization.of(F(1, 5), F(-1, 6))
        gap = cauchy_H(r1, r2) - cauchy_series(r1, r2, SeriesTruncation(degree))
        assert abs(gap) <= cauchy_tail_bound(r1, r2, degree)

    @pytest.mark.parametrize("degree", [4, 10])
    def test_h_o_truncation(self, degree):
        rho = Specialization.of(F(1, 3), F(1, 4), F(-1, 5))
        gap = h_o(rho) - h_o_series(rho, SeriesTruncation(degree))
        assert abs(gap) <= h_o_tail_bound(rho, degree)

    def test_h_o_single_variable(self):
        assert h_o(Specialization.of(F(1, 2))) == 1


class TestPartitionFunctions:
    def test_schur_Z(self, two_level_spec):
        expected = (
            cauchy_H(two_level_spec.rho_plus[0], two_level_spec.rho_minus[0])
            * cauchy_H(two_level_spec.rho_plus[0], two_level_spec.rho_minus[1])
            * cauchy_H(two_level_spec.rho_plus[1], two_level_spec.rho_minus[1])
        )
        assert schur_Z(two_level_spec) == expected

    def test_pf_Z_adds_h_o(self, two_level_spec):
        minus = union_spec(*two_level_spec.rho_minus)
        assert pf_Z(two_level_spec) == h_o(minus) * schur_Z(two_level_spec)

    def test_degree_series_one_row(self, one_row_spec):
        series = degree_series(one_row_spec, False, SeriesTruncation(4))
        assert series == [1, 0, F(1, 4), 0, F(1, 16)]

    def test_tail_bound_is_remainder(self, one_row_spec):
        tail = series_tail_bound(one_row_spec, False, SeriesTruncation(4))
        assert tail == F(4, 3) - (1 + F(1, 4) + F(1, 16))

    def test_tail_bound_shrinks(self):
        spec = SchurSpec.build([[F(1, 2)], [F(1, 3)]], [[F(1, 4)], [F(1, 2)]], pfaffian_mode=True)
        bounds = [series_tail_bound(spec, True, SeriesTruncation(d)) for d in (4, 8, 12)]
        assert bounds[0] > bounds[1] > bounds[2] >= 0
