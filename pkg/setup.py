from setuptools import (
    find_packages,
    setup,
)

VERSION = "0.1.0"

setup(
    name="iondesign",
    version=VERSION,
    license="MIT",
    description=(
        "Design-space estimates for ion-trap and cavity-QED quantum "
        "computers"
    ),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3 :: Only",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    command_options={
        "build_sphinx": {
            "version": ("setup.py", VERSION),
            "release": ("setup.py", VERSION),
        },
    },
    packages=find_packages(exclude=["tests"]),
    package_data={
        "iondesign": [
            "data/species/*.json",
            "data/presets/*.json",
        ],
    },
    python_requires=">=3.8",
    setup_requires=[
        "pip>=19.1",
        "setuptools>=41.0",
        "pytest-runner>=4.4",
    ],
    install_requires=[
        "numpy>=1.17",
        "scipy>=1.9",
        "pandas>=1.0",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0",
            "sphinx>=3.0",
            "sphinx-rtd-theme>=0.4",
        ],
    },
    entry_points={
        "console_scripts": [
            "iondesign=iondesign.cli:main",
        ],
    },
)
