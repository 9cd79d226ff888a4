# For the debugger: python -m main transmit --message OE1GAQ
from src.chanmod.main import main

if __name__ == "__main__":
    main()
