"""
载荷模型测试
"""
from fractions import Fraction

import pytest
from pydantic import ValidationError

from app.models.schemas import (
    ActionPayload,
    Command,
    MatrixPayload,
    PointActionPayload,
    RunConfig,
    ScalarMode,
    SchurSpecPayload,
    TensorPointPayload,
    encode_point,
    encode_scalar,
    mask_key,
    parse_mask,
    parse_scalar,
)

F = Fraction


class TestScalars:
    @pytest.mark.parametrize(
        "cell,expected",
        [(3, F(3)), ("2/3", F(2, 3)), (0.1, F(1, 10)), ([1, 0], F(1)), (["1/2", "0"], F(1, 2))],
    )
    def test_exact(self, cell, expected):
        value = parse_scalar(cell)
        assert isinstance(value, Fraction)
        assert value == expected

    def test_float_mode(self):
        assert parse_scalar("1/4", ScalarMode.FLOAT) == 0.25

    def test_complex(self):
        assert parse_scalar([1, 2]) == complex(1, 2)

    @pytest.mark.parametrize("cell", ["abc", "1/0", True, [1, 2, 3]])
    def test_rejected(self, cell):
        with pytest.raises(ValueError):
            parse_scalar(cell)

    def test_encode(self):
        assert encode_scalar(F(-3, 4)) == "-3/4"
        assert encode_scalar(0.5) == 0.5
        assert encode_scalar(1 + 2j) == [1.0, 2.0]


class TestMatrixPayload:
    def test_bare_list(self):
        A = MatrixPayload.model_validate([[1, "1/2"], [0, 1]]).to_array()
        assert A[0, 1] == F(1, 2)

    def test_declared_shape(self):
        with pytest.raises(ValidationError):
            MatrixPayload.model_validate({"rows": 3, "data": [[1]]})

    def test_ragged(self):
        with pytest.raises(ValidationError):
            MatrixPayload.model_validate([[1, 2], [3]])

    def test_empty(self):
        assert MatrixPayload.model_validate({"rows": 0, "cols": 0, "data": []}).to_array().shape == (0, 0)


class TestSpecs:
    def test_schur_lengths(self):
        with pytest.raises(ValidationError):
            SchurSpecPayload.model_validate({"rho_plus": [[0.5]], "rho_minus": [[0.5], [0.5]]})

    def test_schur_spec(self):
        spec = SchurSpecPayload.model_validate(
            {"rho_plus": [["1/2"]], "rho_minus": [{"vars": ["1/3"]}], "pfaffian": True}
        ).to_spec()
        assert spec.T == 1
        assert spec.pfaffian_mode
        assert spec.rho_minus[0].variables == (F(1, 3),)


class TestTensorPoints:
    def test_masks(self):
        assert parse_mask("0b0101", 4) == 5
        assert parse_mask("11", 2) == 3
        assert mask_key(5, 4) == "0b0101"
        with pytest.raises(ValueError):
            parse_mask("0b100", 2)
        with pytest.raises(ValueError):
            parse_mask("12", 2)

    def test_point_payload(self):
        p = TensorPointPayload.model_validate({"n": 2, "coeffs": {"0b11": "1/2", "0b00": 1}}).to_point()
        assert p.coeffs == (1, 0, 0, F(1, 2))
        assert encode_point(p) == {"n": 2, "coeffs": {"0b00": "1", "0b11": "1/2"}}

    def test_action_kind(self):
        assert ActionPayload.model_validate({"permutation": [2, 1]}).permutation == [2, 1]
        with pytest.raises(ValidationError):
            ActionPayload.model_validate({"factor": 1})

    def test_point_or_witness_required(self):
        with pytest.raises(ValidationError):
            PointActionPayload.model_validate({"actions": []})


class TestRunConfig:
    def test_exact_tolerance(self):
        cfg = RunConfig(command="verify", tol="exact")
        assert cfg.exact
        assert cfg.command == Command.VERIFY

    def test_numeric_tolerance(self):
        cfg = RunConfig(command="kernel", tol="1e-6")
        assert cfg.tol == 1e-6
        assert not cfg.exact

    def test_defaults(self):
        cfg = RunConfig(command="sample")
        assert cfg.cutoff == 12
        assert cfg.seed == 0
        assert cfg.scalar == ScalarMode.EXACT

    @pytest.mark.parametrize("field,value", [("tol", "0"), ("cutoff", -1), ("samples", 0)])
    def test_rejected(self, field, value):
        with pytest.raises(ValidationError):
            RunConfig(command="kernel", **{field: value})
