// pattern: P9 SleepingSender
// expected: no-deadlock
package main

import (
	"fmt"
	"time"
)

func main() {
	ch := make(chan int)
	go func() {
		time.Sleep(100 * time.Millisecond)
		ch <- 1
	}()
	fmt.Println(<-ch)
}
