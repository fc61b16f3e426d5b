import os
import re
import yaml
from dataclasses import dataclass, field
from typing import Dict, Any, Optional, Tuple
from loguru import logger

from src.utils.constants import (
    InferenceDefaults,
    QpnDefaults,
    GameDefaults,
    MsrDefaults,
    VerificationDefaults,
    LoggingDefaults,
)


@dataclass(frozen=True)
class EngineSettings:
    """Resolved engine limits and tolerances."""
    max_joint_states: int = InferenceDefaults.MAX_JOINT_STATES
    tolerance: float = InferenceDefaults.TOLERANCE
    max_trails: int = QpnDefaults.MAX_TRAILS
    max_strategies: int = GameDefaults.MAX_STRATEGIES
    max_profiles: int = GameDefaults.MAX_PROFILES
    tie_tolerance: float = GameDefaults.TIE_TOLERANCE
    msr_grid_points: int = MsrDefaults.GRID_POINTS
    msr_log_floor: float = MsrDefaults.LOG_FLOOR
    msr_stages: Tuple[int, ...] = MsrDefaults.STAGES
    random_networks: int = VerificationDefaults.RANDOM_NETWORKS
    max_random_nodes: int = VerificationDefaults.MAX_RANDOM_NODES
    seed: int = VerificationDefaults.SEED
    log_level: str = LoggingDefaults.LEVEL
    extra: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)


class ConfigLoader:
    """configuration loader with environment variable expansion."""

    DEFAULT_PATH = "config/settings.yaml"

    @staticmethod
    def load_config(file_path: str = DEFAULT_PATH) -> Dict[str, Any]:
        """
        Load YAML configuration file.

        Args:
            file_path: Path to config file, absolute or relative to project root.

        Returns:
            Dictionary containing configuration.
        """
        project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..'))
        abs_path = file_path if os.path.isabs(file_path) else os.path.join(project_root, file_path)

        if not os.path.exists(abs_path):
            logger.warning(f"Config file not found: {abs_path}")
            return {}

        try:
            with open(abs_path, 'r') as f:
                content = f.read()

            expanded_content = ConfigLoader.expand_env_vars(content)

            return yaml.safe_load(expanded_content) or {}

        except Exception as e:
            logger.error(f"Error loading config file {file_path}: {e}")
            return {}

    @staticmethod
    def expand_env_vars(content: str) -> str:
        """
        Expand environment variables in text.
        Format: ${VAR_NAME}
        """
        pattern = re.compile(r'\$\{([^}^{]+)\}')

        def replace_env(match):
            env_var = match.group(1)
            return os.environ.get(env_var, match.group(0))

        return pattern.sub(replace_env, content)

    @staticmethod
    def get_section(section: str, file_path: str = DEFAULT_PATH) -> Dict[str, Any]:
        """
        Get one top-level section of the settings file.

        Args:
            section: Section name in settings.yaml

        Returns:
            Section dictionary, empty if absent.
        """
        config = ConfigLoader.load_config(file_path)
        value = config.get(section) or {}
        if not isinstance(value, dict):
            logger.error(f"Section '{section}' is not a mapping; ignoring it.")
            return {}
        return value

    @staticmethod
    def load_settings(file_path: Optional[str] = None) -> EngineSettings:
        """
        Build EngineSettings from the settings file, falling back to constants.

        SIGSTRUCT_CONFIG overrides the file location.
        """
        path = file_path or os.getenv('SIGSTRUCT_CONFIG', ConfigLoader.DEFAULT_PATH)
        config = ConfigLoader.load_config(path)

        inference = config.get('inference') or {}
        qpn = config.get('qpn') or {}
        games = config.get('games') or {}
        msr = config.get('msr') or {}
        verification = config.get('verification') or {}
        logging_cfg = config.get('logging') or {}

        try:
            return EngineSettings(
                max_joint_states=int(inference.get('max_joint_states', InferenceDefaults.MAX_JOINT_STATES)),
                tolerance=float(inference.get('tolerance', InferenceDefaults.TOLERANCE)),
                max_trails=int(qpn.get('max_trails', QpnDefaults.MAX_TRAILS)),
                max_strategies=int(games.get('max_strategies', GameDefaults.MAX_STRATEGIES)),
                max_profiles=int(games.get('max_profiles', GameDefaults.MAX_PROFILES)),
                tie_tolerance=float(games.get('tie_tolerance', GameDefaults.TIE_TOLERANCE)),
                msr_grid_points=int(msr.get('grid_points', MsrDefaults.GRID_POINTS)),
                msr_log_floor=float(msr.get('log_floor', MsrDefaults.LOG_FLOOR)),
                msr_stages=tuple(int(s) for s in msr.get('stages', MsrDefaults.STAGES)),
                random_networks=int(verification.get('random_networks', VerificationDefaults.RANDOM_NETWORKS)),
                max_random_nodes=int(verification.get('max_random_nodes', VerificationDefaults.MAX_RANDOM_NODES)),
                seed=int(verification.get('seed', VerificationDefaults.SEED)),
                log_level=str(logging_cfg.get('level', LoggingDefaults.LEVEL)),
                extra={k: v for k, v in config.items() if k not in {
                    'inference', 'qpn', 'games', 'msr', 'verification', 'logging'}},
            )
        except (TypeError, ValueError) as e:
            logger.error(f"Invalid value in {path}: {e}. Using defaults.")
            return EngineSettings()
