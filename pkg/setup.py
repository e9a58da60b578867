from setuptools import setup, find_packages

setup(
    name="revhenon",
    version="0.1.0",
    description="Reversible Henon-like maps: periodic orbits, bifurcations and invariant checks",
    packages=find_packages(exclude=["tests"]),
    include_package_data=True,
    package_data={"revhenon": ["data/*.yaml"]},
    install_requires=[
        # Runtime imports; use requirements.txt for pinned deps
        "numpy",
        "scipy",
        "PyYAML",
        "rich",
        "loguru",
        "tenacity",
        "python-dotenv",
    ],
    entry_points={
        "console_scripts": [
            "revhenon=revhenon.main:cli",
        ]
    },
)
