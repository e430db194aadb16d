from setuptools import setup, find_packages

setup(
    name="wittkit",
    version="0.1.0",
    description="Witt vectors, displays, display groups and Rapoport-Zink points over small rings",
    packages=find_packages(exclude=["tests"]),
    license="GPLv3",
    python_requires=">=3.9",
    install_requires=[
        "tqdm",
        "numpy",
        "scipy",
        "pandas",
        "fastparquet",
        "colorlog",
        "sympy",
        "tomli; python_version<'3.11'",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "wittkit = wittkit.cli:main",
        ],
    },
)
