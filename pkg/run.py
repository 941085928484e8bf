#!/usr/bin/env python3
"""
Quick start script for the NAP engine
Checks the dependencies, then hands the arguments to the query front end
"""

import os
import subprocess
import sys


def check_requirements():
    """Check if required packages are installed"""
    try:
        import dotenv
        import numpy
        import pandas
        import sympy
        print("✅ All required packages are installed!")
        return True
    except ImportError as e:
        print(f"❌ Missing package: {e}")
        return False


def install_requirements():
    """Install required packages"""
    print("📦 Installing required packages...")
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])
        print("✅ Packages installed successfully!")
        return True
    except subprocess.CalledProcessError:
        print("❌ Failed to install packages")
        return False


def main():
    """Main function"""
    if not os.path.exists("requirements.txt"):
        print("❌ requirements.txt not found!")
        return 2

    if not check_requirements():
        print("\n📦 Installing missing packages...")
        if not install_requirements():
            print("❌ Failed to install requirements. Please run: pip install -r requirements.txt")
            return 2

    from nap.cli import main as nap_main
    if len(sys.argv) == 1:
        print("🎲 No program given, running the fair lottery on the natural numbers")
        return nap_main(["space nat factorial; prob prog(2,0); prob prog(7,3); eps"])
    return nap_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
