"""Tests for optimizer factory."""

import pytest

from src.optimizers import MOALO, MOALORSI, AlgoParams, BaseOptimizer, OptimizerFactory
from src.optimizers.base import RunResult


class DummyOptimizer(BaseOptimizer):
    """Dummy optimizer for testing."""

    @property
    def algorithm_id(self) -> str:
        return "dummy"

    def run(self, init=None, on_iteration=None):
        return RunResult("dummy", self.params, None)


class TestOptimizerFactory:
    """Test optimizer factory."""

    def test_builtin_registrations(self):
        """Test both algorithms register on package import."""
        available = OptimizerFactory.available_optimizers()
        assert "moalo" in available
        assert "moalo-rsi" in available

    def test_create_builtin(self, small_scenario, small_params):
        optimizer = OptimizerFactory.create("moalo-rsi", small_scenario, small_params)
        assert isinstance(optimizer, MOALORSI)
        assert optimizer.params is small_params
        assert type(OptimizerFactory.create("moalo", small_scenario, small_params)) is MOALO

    def test_register_and_create(self, small_scenario, small_params):
        """Test registering and creating a custom optimizer."""
        OptimizerFactory.register("dummy", DummyOptimizer)
        optimizer = OptimizerFactory.create("dummy", small_scenario, small_params)
        assert isinstance(optimizer, DummyOptimizer)
        assert optimizer.algorithm_id == "dummy"

    def test_case_insensitive(self, small_scenario, small_params):
        assert isinstance(OptimizerFactory.create("MOALO", small_scenario, small_params), MOALO)

    def test_unknown_optimizer(self, small_scenario, small_params):
        """Test creating an unregistered optimizer raises ValueError listing the choices."""
        with pytest.raises(ValueError, match="Unknown optimizer.*moalo"):
            OptimizerFactory.create("nonexistent", small_scenario, small_params)

    def test_extra_arguments_forwarded(self, small_scenario, small_params):
        optimizer = OptimizerFactory.create(
            "moalo-rsi", small_scenario, small_params, use_sorting_filter=False
        )
        assert optimizer.use_sorting_filter is False

    def test_from_config(self, small_scenario, test_config):
        optimizer = OptimizerFactory.from_config("moalo", small_scenario, test_config, seed=9)
        assert optimizer.params == AlgoParams(population_size=6, max_iterations=4, seed=9)
