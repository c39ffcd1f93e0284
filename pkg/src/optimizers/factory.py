"""Optimizer factory with registry pattern."""

from loguru import logger

from src.optimizers.base import AlgoParams, BaseOptimizer
from src.scenario import Scenario


class OptimizerFactory:
    """Registry-based factory for optimizers."""

    _registry: dict[str, type[BaseOptimizer]] = {}

    @classmethod
    def register(cls, name: str, optimizer_class: type[BaseOptimizer]) -> None:
        """Register an optimizer class.

        Args:
            name: Algorithm id (e.g., 'moalo', 'moalo-rsi')
            optimizer_class: The optimizer class to register
        """
        cls._registry[name.lower()] = optimizer_class
        logger.debug(f"Registered optimizer: {name}")

    @classmethod
    def create(cls, name: str, scenario: Scenario, params: AlgoParams, **kwargs) -> BaseOptimizer:
        """Create an optimizer instance.

        Args:
            name: Algorithm id
            scenario: Scenario to optimize
            params: Algorithm parameters
            **kwargs: Extra constructor arguments (e.g., evaluator)

        Returns:
            Initialized optimizer

        Raises:
            ValueError: If the algorithm id is not registered
        """
        name_lower = name.lower()
        if name_lower not in cls._registry:
            available = ", ".join(cls._registry.keys()) or "none"
            raise ValueError(f"Unknown optimizer: '{name}'. Available: {available}")
        return cls._registry[name_lower](scenario, params, **kwargs)

    @classmethod
    def from_config(cls, name: str, scenario: Scenario, settings, seed: int, **kwargs):
        """Create an optimizer whose parameters come from application settings."""
        params = AlgoParams.from_settings(settings, seed=seed)
        return cls.create(name, scenario, params, **kwargs)

    @classmethod
    def available_optimizers(cls) -> list:
        """Return list of registered algorithm ids."""
        return list(cls._registry.keys())
