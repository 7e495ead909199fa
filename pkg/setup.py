import setuptools
import momc

with open('requirements.txt') as fp:
    requirements = fp.readlines()

with open('README.rst') as fp:
    long_description = fp.read()

setuptools.setup(
    name='momc',
    version=momc.__version__,
    description='Pareto curve approximation for multi-objective Markov decision processes',
    long_description=long_description,
    long_description_content_type='text/x-rst',
    packages=['momc', 'momc.scripts', 'momc.models'],
    package_data={'momc': ['res/*.json']},
    entry_points={
        'console_scripts': [
            'momc-pareto=momc.scripts.momc_pareto:main',
            'momc-validate=momc.scripts.momc_validate:main',
        ],
    },
    python_requires='>=3.6',
    install_requires=requirements,
    classifiers=[
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Software Development :: Libraries',
    ],
)
