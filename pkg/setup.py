from setuptools import setup, find_packages

setup(name='CARBONSIM',
      version='0.1',
      packages=find_packages(exclude=['tests']),
      package_data={'CARBONSIM' : ['data/platforms/*.xml', 'data/workloads/*.json',
                                   'data/traces/*.csv', 'data/events/*.csv']},
      install_requires=['numpy', 'pandas', 'scikit-learn', 'loguru'],
      extras_require={'test' : ['pytest', 'hypothesis']},
      entry_points={'console_scripts' : ['carbonsim = CARBONSIM.cli:main']})
