from setuptools import setup

from gjsd import __version__

setup(
    name='GeneralizedJSD',
    version=__version__,
    packages=['gjsd'],
    license='MIT',
    author='GeneralizedJSD developers',
    description='Generalized (M, N) Jensen-Shannon divergences, closed forms and numerical oracles',
    scripts=['bin/gjsd_toolkit.py'],
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    python_requires='>=3.7',
    install_requires=[
        'numpy',
        'scipy',
    ],
    extras_require={
        'docs': ['sphinx'],
    },
    test_suite='tests',
)
