# Use all imports relative to root directory
from src.models.manager import Model


class SourceModel(Model):
    """Base class for a config-named photon source"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)

    def build(self, n_max):
        """Returns the PhotonNumberDistribution of this source truncated at n_max"""
        raise NotImplementedError
