from codecs import open
import os
from setuptools import setup, find_packages

here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, 'README.rst')) as f:
    long_description = f.read()

with open(os.path.join(here, 'DomainSearch/__version__.py')) as f:
    __version__ = f.read().split("'")[1]

requirements = ['numpy>=1.17',
                'toolz',
                'dask>=2.0',
                'sidpy>=0.0.2',
                'pyyaml>=5.1',
                'pydantic>=2.0',
                'beautifulsoup4>=4.9',
                ]

setup(
    name='DomainSearch',
    version=__version__,
    description='Domain-scoped keyword search over a semantic peer-to-peer '
                'overlay, with a deterministic network simulator',
    long_description=long_description,
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Internet :: File Transfer Protocol (FTP)',
        'Topic :: Text Processing :: Indexing',
        'Topic :: System :: Distributed Computing'],
    keywords=['peer-to-peer', 'search', 'overlay', 'inverted index', 'simulation'],
    packages=find_packages(exclude=["*.tests", "*.tests.*", "tests.*",
                                    "tests"]),
    license='MIT',
    install_requires=requirements,
    python_requires='>=3.8',
    tests_require=['pytest'],
    platforms=['Linux', 'Mac OSX', 'Windows 10/8.1/8/7'],
    test_suite='pytest',
    include_package_data=True,
    extras_require={
    },
    entry_points={
        'console_scripts': [
            'sp2p=DomainSearch.node.cli:main',
        ],
    },
)
