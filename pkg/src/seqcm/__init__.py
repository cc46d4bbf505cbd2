try:
    from setuptools_scm import get_version
    __version__ = get_version(root="../..", relative_to=__file__)
except (ImportError, LookupError):
    from importlib.metadata import PackageNotFoundError, version
    try:
        __version__ = version("seqcm")
    except PackageNotFoundError:
        __version__ = "0.0.0"
