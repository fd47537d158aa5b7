# Use all imports relative to root directory
from src.channel_adversary import AdversarySpec
from src.models.manager import Model


class AdversaryModel(Model):
    """Base class for a config-named channel or eavesdropper"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)

    def spec(self):
        """Returns the AdversarySpec this model stands for"""
        raise NotImplementedError

    @staticmethod
    def make_spec(kind, **params):
        return AdversarySpec(kind=kind, **params)
