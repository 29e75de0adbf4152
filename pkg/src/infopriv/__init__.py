"""Information-privacy analysis for discrete privacy channels."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConditioningError,
    DimensionError,
    DistributionError,
    InfeasibleError,
    InfoPrivError,
    SamplingError,
)
from .probability import (  # noqa: E402
    JointDistribution,
    MarginalDistribution,
    UniverseShape,
    conditional,
    conditional_mutual_information,
    entropy,
    flatten,
    marginal,
    mutual_information,
    unflatten,
)
from .channels import (  # noqa: E402
    MatrixUniverse,
    PrivacyChannel,
    compose_independent,
    compose_same_input,
    generate,
    induced_channel,
    joint_io,
    output_distribution,
)
