from setuptools import setup, find_packages

# Read the contents of the readme to publish it to PyPI
with open("README.md") as readme:
    long_description = readme.read()

setup(
    name="seqcm",
    description="Sequentially Cohen-Macaulay profiles of monomial quotients",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Operating System :: OS Independent",
    ],
    packages=find_packages("src"),
    package_dir={"": "src"},
    package_data={"seqcm": ["data/*.seq", "data/*.expected.json"]},
    include_package_data=True,
    use_scm_version={"fallback_version": "0.1.0"},
    python_requires=">=3.9",
    setup_requires=[
        "setuptools_scm",
    ],
    install_requires=[
        "Click>=7.0",
        "sympy>=1.12,<1.14",
        "setuptools",
        "setuptools_scm",
    ],
    extras_require={
        "test": [
            "pylint",
            "pytest",
        ]
    },
    entry_points={
        "console_scripts": [
            "seqcm=seqcm.cli:cli",
        ],
    },
)
