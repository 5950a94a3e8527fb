from setuptools import setup, find_packages

setup(
    name='orderloss',
    version='1.0.0',
    description='Distillable entanglement and information loss of entangled pairs '
                'whose order is lost',
    license='GPLv3',
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    package_data={'orderloss': ['_config_files/*.orderloss_conf']},
    install_requires=[
        'numpy>=1.23.2',
        'scipy>=1.9.0',
        'pandas>=1.5.0',
        'tqdm~=4.64.1',
        'pydantic~=1.10.7'
        ],
    extras_require={
        'test': ['pytest>=7.0']
        },
    entry_points={
        'console_scripts': ['orderloss=orderloss.orderloss_main:cli']
        },
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown'
    )
