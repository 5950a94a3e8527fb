"""
This file includes the subclass selection for the pluggable modules
(e.g. the Hermitian eigensolver).
"""
__all__ = ["get_subclass"]
__version__ = "1.1"
__date__ = "2024-03-11"

import re
from typing import Type, TypeVar, Union, List

from .orderloss_logging import logger
from .orderloss_control import ModuleKwargs

T = TypeVar('T')


class SubClassLoader:
    """
    Callable that resolves a subclass of a parent class by its name
    and initializes it with the remaining keywords.
    Resolved classes are cached by (parent, name).
    """

    def __init__(self):
        self._resolved = {}

    def __call__(
            self,
            ParentClass: Type[T],
            modul_kwargs: Union[ModuleKwargs, dict],
            initialize: bool = True,
            ) -> Union[Type[T], T]:
        """
        Parameters
        ----------
        ParentClass : class
        modul_kwargs : ModuleKwargs or dict
            must contain 'name'; the remaining keys are passed to __init__
        initialize : bool, optional
            return initialized instance

        Returns
        -------
        subcls : class or instance
        """
        if isinstance(modul_kwargs, dict):
            modul_kwargs = ModuleKwargs.parse_obj(modul_kwargs)
        name = modul_kwargs.name
        kwargs = modul_kwargs.init_kwargs

        key = (ParentClass, name)
        if key not in self._resolved:
            candidates = self.get_subclasses(ParentClass, name)
            self._resolved[key] = self.check_unambiguity(candidates, ParentClass, name)
        subcls = self._resolved[key]

        if initialize:
            logger.debug(f'initialize {subcls.__name__} with keywords {kwargs}')
            return subcls(**kwargs)
        return subcls

    @staticmethod
    def all_subclasses(ParentClass: Type[T]) -> List[Type[T]]:
        out = []
        for sub in ParentClass.__subclasses__():
            out.append(sub)
            out.extend(SubClassLoader.all_subclasses(sub))
        return out

    @staticmethod
    def get_subclasses(ParentClass: Type[T], name: str) -> List[Type[T]]:
        """
        find subclasses matching name.
        accepted spellings for a class 'ThisIsAClass' are
        'ThisIsAClass', 'thisisaclass' and 'this_is_a_class'.
        """
        s1 = re.sub('(.)([A-Z][a-z]+)', r'\1_\2', name)
        snakecase = re.sub('([a-z0-9])([A-Z])', r'\1_\2', s1).lower()
        camel = ''.join(ele.title() for ele in name.split('_'))
        wanted = {name, name.lower(), snakecase, camel}

        found = []
        for sub in SubClassLoader.all_subclasses(ParentClass):
            cls_name = sub.__name__
            s1 = re.sub('(.)([A-Z][a-z]+)', r'\1_\2', cls_name)
            cls_snake = re.sub('([a-z0-9])([A-Z])', r'\1_\2', s1).lower()
            if wanted & {cls_name, cls_name.lower(), cls_snake}:
                found.append(sub)
        return found

    @staticmethod
    def check_unambiguity(subclasses: List[Type[T]], ParentClass: Type[T], name: str) -> Type[T]:
        """ check that exactly one subclass was found """
        if len(subclasses) > 1:
            msg = f"Found more than one subclass of {ParentClass.__name__} with name = '{name}'"
            logger.critical(msg)
            raise ModuleNotFoundError(msg)

        if len(subclasses) == 0:
            known = [sub.__name__ for sub in SubClassLoader.all_subclasses(ParentClass)]
            msg = f"No subclass of {ParentClass.__name__} found with name = '{name}' " \
                  f"(known: {known})"
            logger.critical(msg)
            raise ModuleNotFoundError(msg)

        logger.log(15, f"set {ParentClass.__name__} class to {subclasses[0].__name__}")
        return subclasses[0]


get_subclass = SubClassLoader()
