# Runs the experiment harness from the command line without entering the Python interpreter. For example:
#
#     python3 -m shufflesum msg-count --n 100 --q 2003 --sigma 40

from shufflesum.runner.base import main

if __name__ == "__main__":
    main()
