"""Agent-based simulation of decentralized managerial search on rugged
NK performance landscapes: satisficing decision makers with adaptive
aspirations and search effort versus fixed-rule hill climbers."""

from .landscape import (
    InteractionStructure,
    Landscape,
    build_structure,
    config_to_index,
    dump_landscape,
    generate_landscape,
    index_to_config,
    landscape_from_dict,
    load_landscape,
)
from .organization import (
    ManagerState,
    ManagerStreams,
    Organization,
    PeriodOutcome,
    perceive,
    step_period,
)
from .strategies import (
    HillClimbing,
    Satisficing,
    SearchOutcome,
    closest_first_sequence,
    hill_climb_search,
    satisficing_search,
    strategy_from_name,
    update_aspiration,
    update_search_space,
)
from .simulation import (
    RunMetrics,
    RunTrace,
    ScenarioConfig,
    ScenarioSummary,
    build_scenario_landscape,
    config_from_dict,
    run_scenario,
    run_single,
    run_single_with_trace,
    sensitivity_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "InteractionStructure", "Landscape", "build_structure", "generate_landscape",
    "config_to_index", "index_to_config", "dump_landscape", "load_landscape",
    "landscape_from_dict",
    "ManagerState", "ManagerStreams", "Organization", "PeriodOutcome",
    "perceive", "step_period",
    "Satisficing", "HillClimbing", "SearchOutcome", "closest_first_sequence",
    "satisficing_search", "hill_climb_search", "strategy_from_name",
    "update_aspiration", "update_search_space",
    "ScenarioConfig", "ScenarioSummary", "RunMetrics", "RunTrace",
    "build_scenario_landscape", "config_from_dict", "run_single",
    "run_single_with_trace", "run_scenario", "sensitivity_sweep",
]
