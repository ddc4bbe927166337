import ast
import os
import platform
import sys

from setuptools import setup


def get_version():
    path = os.path.join(os.path.dirname(__file__), 'rabi', 'regimes', '__init__.py')
    with open(path) as file:
        for line in file:
            if line.startswith('__version__'):
                _, value = line.split('=', maxsplit=1)
                return ast.literal_eval(value.strip())
        else:
            raise Exception('Version not found in {}'.format(path))


def read(file):
    return open(os.path.join(os.path.dirname(__file__), file)).read().strip()


# Allow setup.py to be run from any path
os.chdir(os.path.normpath(os.path.join(os.path.abspath(__file__), os.pardir)))

# Import long description
long_description = '\n\n'.join((read('README.rst'), read('CHANGELOG.rst')))

# Check python version
py_version = sys.version_info[:3]
if py_version < (3, 8, 0):
    raise Exception("rabi.regimes requires Python >= 3.8")

# Logging requirements
logging_require = [
    'logbook>=1.5.3,<2',
]

# mypy currently does not run on pypy
if platform.python_implementation() == 'PyPy':
    mypy_require = []
else:
    mypy_require = [
        'mypy>=0.910',
    ]

# Test requirements
# Note: These are just tools that aren't required, so a version range
#       is not necessary here.
tests_require = [
    'pytest>=6.2.0',
    'pytest-asyncio>=0.17.0',
    'pytest-cov>=2.5.1',
    'flake8>=3.7.8',
    'isort>=5.0.0',
    'mpmath>=1.1.0',  # reference values of the special functions
] + logging_require + mypy_require

setup(
    name='rabi.regimes',
    version=get_version(),
    packages=['rabi', 'rabi.regimes'],
    package_data={'rabi.regimes': ['py.typed']},
    install_requires=[
        'click>=8.0,<9',
        'numpy>=1.20',
        'scipy>=1.7',
        'pandas>=1.5',
    ],
    tests_require=tests_require,
    extras_require={
        'dev': tests_require,
        'logging': logging_require,
    },
    include_package_data=True,
    entry_points={
        'console_scripts': [
            'rabi-regimes = rabi.regimes.bin:main',
        ],
    },

    # PyPI metadata
    description=('Classification of the coupling regimes of the quantum Rabi model '
                 'from its exact and perturbative spectra.'),
    long_description=long_description,
    license='MIT',
    keywords='quantum rabi model ultrastrong deep-strong coupling spectrum',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)
