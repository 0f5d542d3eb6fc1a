from spritemesh.cli import main

raise SystemExit(main())
