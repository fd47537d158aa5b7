"""
Model/Extension framework
Adapated from https://github.com/gdiepen/python_processor_example
"""
import inspect
import pkgutil

from src.logger import logger
from src.utils.exceptions import ConfigurationError


class Model:
    """Base class that each source or adversary model must inherit from."""

    # Value of the "type" key this model answers to in config.json
    type_name = None

    def __init__(self, options=None):
        self.options = options or {}

    def with_param(self, name, value):
        """Returns a copy of this model with one scalar option replaced"""
        if name not in self.options:
            raise KeyError(name)
        options = {**self.options, name: value}
        return self.__class__(options=options)


class ModelManager:
    """Upon creation, this class will read the models package for modules
    that contain a class definition that is inheriting from the Model class
    """

    def __init__(self, models_dir="src.models"):
        """Constructor that initiates the reading of all available models
        when an instance of the ModelManager object is created
        """
        self.models_dir = models_dir
        self.reload_models()

    @staticmethod
    def get_name_filter(model_name):
        def filter_function(member):
            return inspect.isclass(member) and member.__module__ == model_name

        return filter_function

    def reload_models(self):
        """Reset the registries and walk the models package again"""
        # interfaces are imported lazily to keep them out of the walk's import cycle
        from src.models.interfaces.AdversaryModel import AdversaryModel
        from src.models.interfaces.SourceModel import SourceModel

        self.families = {SourceModel: {}, AdversaryModel: {}}
        self.sources = self.families[SourceModel]
        self.adversaries = self.families[AdversaryModel]

        logger.debug(f'Loading models from "{self.models_dir}"...')
        self.walk_package(self.models_dir)

    def walk_package(self, package):
        """walk the supplied package to retrieve all models"""
        imported_package = __import__(package, fromlist=["blah"])
        loaded_models = []
        for _, model_name, ispkg in pkgutil.walk_packages(
            imported_package.__path__, imported_package.__name__ + "."
        ):
            if not ispkg and model_name != __name__:
                model_module = __import__(model_name, fromlist=["blah"])
                # https://stackoverflow.com/a/46206754/6242649
                clsmembers = inspect.getmembers(
                    model_module,
                    ModelManager.get_name_filter(model_name),
                )
                for _, c in clsmembers:
                    # Only concrete models, i.e. those answering to a config type
                    if not issubclass(c, Model) or c.type_name is None:
                        continue
                    for family, registry in self.families.items():
                        if issubclass(c, family):
                            registry[c.type_name] = c
                            loaded_models.append(c.__name__)

        logger.debug(f"Loaded models: {loaded_models}")

    def create_source(self, options):
        return self.create(self.sources, "source", options)

    def create_adversary(self, options):
        return self.create(self.adversaries, "adversary", options)

    @staticmethod
    def create(registry, family_name, options):
        options = dict(options)
        type_name = options.pop("type", None)
        if type_name not in registry:
            logger.critical(
                f"Unknown {family_name} type '{type_name}', available: {sorted(registry)}"
            )
            raise ConfigurationError(f"Unknown {family_name} type: '{type_name}'")
        ModelClass = registry[type_name]
        return ModelClass(options=options)


# Singleton export
MODEL_MANAGER = ModelManager()
