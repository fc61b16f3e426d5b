from enum import Enum


class CanonicalModelId(str, Enum):
    """Canonical signal models addressable by id."""
    FIG1A = "Fig1a"
    FIG1B = "Fig1b"
    FIG1C = "Fig1c"
    FIG1D = "Fig1d"
    FIG2A = "Fig2a"
    FIG2B = "Fig2b"
    FIG3A = "Fig3a"
    FIG3B = "Fig3b"
    FIG4A = "Fig4a"
    FIG4B = "Fig4b"
    FIG5_CHANCE = "Fig5chance"
    FIG6_CHANCE = "Fig6chance"
    APPENDIX_A = "AppendixA"


class QpnPresetId(str, Enum):
    """Qualitative network presets."""
    FIG1A = "fig1a"
    FIG5 = "fig5"
    FIG5_IPV = "fig5-ipv"
    FIG5_SPSB = "fig5-spsb"
    FIG6 = "fig6"


class AuctionKind(str, Enum):
    """Sealed-bid auction formats."""
    FPSB = "FPSB"
    SPSB = "SPSB"


class ModelKind(str, Enum):
    """Kinds of model file documents."""
    BAYESNET = "bayesnet"
    INTERPRETED = "interpreted"
    QPN = "qpn"
    GAME = "game"
    MSR = "msr"


class InferenceDefaults:
    """Defaults for exact enumeration."""
    MAX_JOINT_STATES = 2 ** 22
    TOLERANCE = 1e-9


class QpnDefaults:
    """Defaults for qualitative trail enumeration."""
    MAX_TRAILS = 10000


class GameDefaults:
    """Defaults for finite game solving."""
    MAX_STRATEGIES = 1_000_000
    MAX_PROFILES = 200_000
    TIE_TOLERANCE = 1e-12
    DESK_GRID = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


class MsrDefaults:
    """Defaults for the market scoring rule game."""
    GRID_POINTS = 21
    LOG_FLOOR = 1e-9
    STAGES = (0, 1, 0)
    STAGE_NOTE = "stage order A,B,A is a configurable default, not taken from the market literature"


class SearchBounds:
    """Exhaustive search limits."""
    MAX_CI_ATTRIBUTES = 4
    MAX_INTERPRETATION_AGENTS = 3
    MAX_INTERPRETATION_STATES = 64
    MAX_SWEEP_ATTRIBUTES = 3


class VerificationDefaults:
    """Defaults for the verify-paper harness."""
    RANDOM_NETWORKS = 200
    MAX_RANDOM_NODES = 6
    SEED = 0
    MODELS_DIR = "data/models"


class LoggingDefaults:
    """Defaults for log sinks."""
    LEVEL = "WARNING"


class AppMetadata:
    """Branding and metadata for the command line."""
    TITLE = "sigstruct"
    DESCRIPTION = "Causal signal structures for games of incomplete information"
    FORMAT_VERSION = 1
