"""Indoor 5 GHz WiFi path loss models, fitting and MCS prediction."""

from .errors import (
    CaptureFormatError,
    DomainError,
    FitError,
    InsufficientDataError,
    NoDataError,
    OutOfRangeError,
    UnknownLocationError,
)
from .pathloss import (
    DEFAULT_PARAMS,
    LinkBudget,
    LinkGeometry,
    ModelId,
    PathLossParams,
    evaluate,
    link_budget,
    pl_enterprise,
    pl_itu,
    pl_log_distance,
    pl_residential,
    pl_tmb,
    pl_wall_factor,
    rssi_at,
)
from .fitting import (
    FitReport,
    PathLossSample,
    compute_wbar,
    fit_full,
    fit_log_distance,
    fit_wall_k,
    rmse,
)
from .measurements import (
    LocationRegistry,
    PacketRecord,
    aggregate_path_loss,
    channel_variance,
    grid_variance,
    parse_capture,
    time_variance,
)
from .rate_model import (
    McsDistributionTable,
    RatePrediction,
    RssiBin,
    build_table,
    phy_rate,
    query_by_distance,
    query_by_rssi,
)

__version__ = "0.1.0"
