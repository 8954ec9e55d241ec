from .argparser import Argparser
__all__ = ["Argparser"]
